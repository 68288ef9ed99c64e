// Config-driven experiment runner: parameter grids, parallel replicas with
// deterministic per-replica seeding, theory comparison, and CSV/JSONL output.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trapwalk/estimators.hpp"
#include "trapwalk/walk.hpp"

namespace trapwalk {

enum class Model { Bouchaud, CombReduced, CombGraph, LadderReduced, LadderGraph };
enum class OutputFormat { Csv, Jsonl };

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class RunError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* model_name(Model model);
Model parse_model(const std::string& name);
OutputFormat parse_output_format(const std::string& name);

// "0.25,0.5,1" or "start:stop:step" (inclusive endpoints).
std::vector<double> parse_grid(const std::string& text);

struct ExperimentConfig {
  Model model = Model::Bouchaud;
  std::vector<double> lambda;
  std::vector<double> alpha;            // empty when lambda_crit drives alpha
  std::vector<double> q;                // required for comb/ladder models
  std::optional<double> lambda_crit;    // bouchaud only: alpha = lambda_crit/lambda
  std::uint64_t steps = 1000000;
  std::uint32_t replicas = 8;
  std::uint64_t master_seed = 1;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool timing = false;   // fill wallclock_ms (breaks byte-reproducibility)
  bool curve = false;
  std::string dump_env_path;
  std::string dump_trace_path;
};

void validate_config(const ExperimentConfig& config);

struct ResultRow {
  Model model = Model::Bouchaud;
  double lambda = 0.0;
  double alpha = 0.0;
  std::optional<double> q;
  std::optional<double> lambda_crit;
  std::uint64_t steps = 0;
  std::uint32_t replicas = 0;
  std::uint64_t seed = 0;
  SpeedEstimate estimate;
  std::string regime;        // "positive" | "zero_speed"
  double diagnostic = 0.0;   // rel_err, or v(T)/v(T/100) for zero_speed rows
  std::optional<std::int64_t> wallclock_ms;
};

// Runs the whole grid, writes one row per grid point to `out` in grid order,
// and returns the rows. Output bytes depend only on the config (and
// wallclock_ms when timing is on), never on thread scheduling.
std::vector<ResultRow> run_experiments(const ExperimentConfig& config, std::ostream& out);

// Figure-style speed curve for the drift-dependent Bouchaud tail: rows
// "lambda<TAB>v_theory" plus an empirical column when steps and replicas are
// both set.
void emit_speed_curve(const ExperimentConfig& config, std::ostream& out);

struct PointParams {
  Model model = Model::Bouchaud;
  double lambda = 0.0;
  double alpha = 0.0;
  double q = 0.0;  // ignored by Bouchaud
};

// Theoretical speed for a parameter point.
double point_speed_theory(const PointParams& point);

// One replica at a parameter point; randomness derives from
// (master_seed, replica) only.
WalkRun run_model_once(const PointParams& point, std::uint64_t steps, std::uint64_t master_seed,
                       std::uint32_t replica, const RunOptions& opt = {});

// Replica pool used by the runner; tasks must be independent.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

// Shortest round-trip decimal form.
std::string format_double(double value);

extern const char* const kCsvHeader;

}  // namespace trapwalk
