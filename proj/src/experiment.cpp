#include "trapwalk/experiment.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "trapwalk/formulas.hpp"

namespace trapwalk {

const char* const kCsvHeader =
    "model,lambda,alpha,q,lambda_crit,steps,replicas,seed,v_hat,ci_low,ci_high,v_theory,"
    "rel_err,regime,wallclock_ms";

const char* model_name(Model model) {
  switch (model) {
    case Model::Bouchaud: return "bouchaud";
    case Model::CombReduced: return "comb_reduced";
    case Model::CombGraph: return "comb_graph";
    case Model::LadderReduced: return "ladder_reduced";
    case Model::LadderGraph: return "ladder_graph";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  if (name == "bouchaud") return Model::Bouchaud;
  if (name == "comb_reduced") return Model::CombReduced;
  if (name == "comb_graph") return Model::CombGraph;
  if (name == "ladder_reduced") return Model::LadderReduced;
  if (name == "ladder_graph") return Model::LadderGraph;
  throw ConfigError("model: unknown value '" + name +
                    "' (expected bouchaud|comb_reduced|comb_graph|ladder_reduced|ladder_graph)");
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "jsonl") return OutputFormat::Jsonl;
  throw ConfigError("format: unknown value '" + name + "' (expected csv|jsonl)");
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& text, const char* context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(context) + ": cannot parse number '" + text + "'");
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("grid: empty specification");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    if (text.find(',') != std::string::npos)
      throw ConfigError("grid: cannot mix ',' list and ':' range in '" + text + "'");
    std::array<std::string, 3> part;
    std::size_t prev = 0;
    int n = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ':') {
        if (n >= 3) throw ConfigError("grid: expected start:stop:step in '" + text + "'");
        part[n++] = text.substr(prev, i - prev);
        prev = i + 1;
      }
    }
    if (n != 3) throw ConfigError("grid: expected start:stop:step in '" + text + "'");
    const double start = parse_double(part[0], "grid");
    const double stop = parse_double(part[1], "grid");
    const double step = parse_double(part[2], "grid");
    if (!(step > 0.0)) throw ConfigError("grid: step must be positive in '" + text + "'");
    if (stop < start) throw ConfigError("grid: stop below start in '" + text + "'");
    const auto count = static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    std::size_t prev = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ',') {
        const std::string item = text.substr(prev, i - prev);
        out.push_back(parse_double(item, "grid"));
        prev = i + 1;
      }
    }
  }
  return out;
}

namespace {

bool uses_q(Model model) { return model != Model::Bouchaud; }

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.lambda.empty()) throw ConfigError("lambda: at least one value required");
  for (double l : config.lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("lambda: values must be finite and >= 0");
    if (!config.curve && !(l > 0.0)) throw ConfigError("lambda: values must be positive");
  }
  if (config.curve) {
    if (!config.lambda_crit) throw ConfigError("lambda_crit: required in curve mode");
    if (!(*config.lambda_crit > 0.0)) throw ConfigError("lambda_crit: must be positive");
    if (config.steps > 0 && config.replicas == 1)
      throw ConfigError("replicas: need >= 2 for an empirical overlay");
    return;
  }
  if (config.lambda_crit) {
    if (config.model != Model::Bouchaud)
      throw ConfigError("lambda_crit: only meaningful for model=bouchaud");
    if (!(*config.lambda_crit > 0.0)) throw ConfigError("lambda_crit: must be positive");
    if (!config.alpha.empty())
      throw ConfigError("alpha: mutually exclusive with lambda_crit (alpha = lambda_crit/lambda)");
  } else {
    if (config.alpha.empty()) throw ConfigError("alpha: at least one value required");
    for (double a : config.alpha)
      if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha: values must be positive");
  }
  if (uses_q(config.model)) {
    if (config.q.empty()) throw ConfigError("q: required for comb/ladder models");
    for (double v : config.q)
      if (!(v > 0.0 && v < 1.0)) throw ConfigError("q: values must be in (0,1)");
  }
  if (config.steps == 0) throw ConfigError("steps: must be positive");
  if (config.replicas < 2) throw ConfigError("replicas: need at least 2 for confidence intervals");
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

double point_speed_theory(const PointParams& point) {
  switch (point.model) {
    case Model::Bouchaud: return speed_example2(point.lambda, point.alpha);
    case Model::CombReduced:
    case Model::CombGraph: return speed_example1(point.lambda, point.alpha, point.q);
    case Model::LadderReduced:
    case Model::LadderGraph: return speed_example3(point.lambda, point.alpha, point.q);
  }
  return 0.0;
}

WalkRun run_model_once(const PointParams& point, std::uint64_t steps, std::uint64_t master_seed,
                       std::uint32_t replica, const RunOptions& opt) {
  const ReplicaKey seed{master_seed, replica};
  switch (point.model) {
    case Model::Bouchaud: {
      TrapEnvironment env = TrapEnvironment::pareto_iid(point.alpha, seed);
      WalkRun run = run_reduced(env, HoldingTimeModel::exponential(), point.lambda,
                                StopRule::steps(steps), seed, opt);
      run.model = model_name(point.model);
      return run;
    }
    case Model::CombReduced: {
      TrapEnvironment env =
          TrapEnvironment::comb_geometric(point.alpha, point.q, point.lambda, seed);
      WalkRun run = run_reduced(env, HoldingTimeModel::trap_compound(point.lambda, point.q),
                                point.lambda, StopRule::steps(steps), seed, opt);
      run.model = model_name(point.model);
      return run;
    }
    case Model::CombGraph: {
      TrapEnvironment env =
          TrapEnvironment::comb_geometric(point.alpha, point.q, point.lambda, seed);
      return run_comb_graph(env, point.lambda, point.q, steps, seed, opt);
    }
    case Model::LadderReduced: {
      TrapEnvironment env =
          TrapEnvironment::ladder_markov(point.alpha, point.q, point.lambda, seed);
      WalkRun run = run_reduced(env, HoldingTimeModel::trap_compound(point.lambda, point.q),
                                point.lambda, StopRule::steps(steps), seed, opt);
      run.model = model_name(point.model);
      return run;
    }
    case Model::LadderGraph: {
      TrapEnvironment env =
          TrapEnvironment::ladder_markov(point.alpha, point.q, point.lambda, seed);
      return run_ladder_graph(env, point.lambda, point.q, steps, seed, opt);
    }
  }
  throw std::logic_error("run_model_once: unknown model");
}

namespace {

struct GridPoint {
  PointParams params;
  std::optional<double> q_shown;
  std::optional<double> crit_shown;
  double v_theory = 0.0;
  bool zero_speed = false;
};

std::vector<GridPoint> build_grid(const ExperimentConfig& config) {
  std::vector<GridPoint> grid;
  const std::vector<double> qs = uses_q(config.model) ? config.q : std::vector<double>{0.0};
  for (double lambda : config.lambda) {
    std::vector<double> alphas = config.alpha;
    if (config.lambda_crit) alphas = {*config.lambda_crit / lambda};
    for (double alpha : alphas) {
      for (double q : qs) {
        GridPoint g;
        g.params = PointParams{config.model, lambda, alpha, q};
        if (uses_q(config.model)) g.q_shown = q;
        if (config.lambda_crit) g.crit_shown = *config.lambda_crit;
        g.v_theory = point_speed_theory(g.params);
        g.zero_speed = g.v_theory == 0.0;
        grid.push_back(g);
      }
    }
  }
  return grid;
}

std::string csv_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_row_csv(std::ostream& out, const ResultRow& row) {
  out << model_name(row.model) << ',' << format_double(row.lambda) << ','
      << format_double(row.alpha) << ',' << csv_field(row.q) << ',' << csv_field(row.lambda_crit)
      << ',' << row.steps << ',' << row.replicas << ',' << row.seed << ','
      << format_double(row.estimate.v_hat) << ',' << format_double(row.estimate.ci_low) << ','
      << format_double(row.estimate.ci_high) << ',' << format_double(row.estimate.v_theory) << ','
      << format_double(row.diagnostic) << ',' << row.regime << ',';
  if (row.wallclock_ms) out << *row.wallclock_ms;
  out << '\n';
}

void write_row_jsonl(std::ostream& out, const ResultRow& row) {
  nlohmann::ordered_json j;
  j["model"] = model_name(row.model);
  j["lambda"] = row.lambda;
  j["alpha"] = row.alpha;
  j["q"] = row.q ? nlohmann::json(*row.q) : nlohmann::json(nullptr);
  j["lambda_crit"] = row.lambda_crit ? nlohmann::json(*row.lambda_crit) : nlohmann::json(nullptr);
  j["steps"] = row.steps;
  j["replicas"] = row.replicas;
  j["seed"] = row.seed;
  j["v_hat"] = row.estimate.v_hat;
  j["ci_low"] = row.estimate.ci_low;
  j["ci_high"] = row.estimate.ci_high;
  j["v_theory"] = row.estimate.v_theory;
  j["rel_err"] = row.diagnostic;
  j["regime"] = row.regime;
  j["wallclock_ms"] =
      row.wallclock_ms ? nlohmann::json(*row.wallclock_ms) : nlohmann::json(nullptr);
  out << j.dump() << '\n';
}

std::string describe_point(const GridPoint& g) {
  std::ostringstream os;
  os << model_name(g.params.model) << " lambda=" << g.params.lambda
     << " alpha=" << g.params.alpha;
  if (g.q_shown) os << " q=" << *g.q_shown;
  return os.str();
}

}  // namespace

std::vector<ResultRow> run_experiments(const ExperimentConfig& config, std::ostream& out) {
  validate_config(config);
  const std::vector<GridPoint> grid = build_grid(config);
  const std::uint64_t short_steps = std::max<std::uint64_t>(config.steps / 100, 1000);

  struct Task {
    std::size_t grid_index;
    std::uint32_t replica;
    bool short_horizon;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::uint32_t r = 0; r < config.replicas; ++r) {
      tasks.push_back({g, r, false});
      if (grid[g].zero_speed && short_steps < config.steps) tasks.push_back({g, r, true});
    }
  }

  std::vector<std::vector<double>> main_speed(grid.size());
  std::vector<std::vector<double>> short_speed(grid.size());
  std::vector<std::atomic<std::int64_t>> elapsed_ms(grid.size());
  for (auto& g : main_speed) g.resize(config.replicas);
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (grid[g].zero_speed && short_steps < config.steps) short_speed[g].resize(config.replicas);

  const bool want_trace = !config.dump_trace_path.empty();
  std::vector<TraceSample> trace;
  std::mutex trace_mutex;

  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const GridPoint& g = grid[task.grid_index];
    try {
      RunOptions opt;
      if (want_trace && task.grid_index == 0 && task.replica == 0 && !task.short_horizon)
        opt.log_trace = true;
      const auto t0 = std::chrono::steady_clock::now();
      WalkRun run = run_model_once(g.params, task.short_horizon ? short_steps : config.steps,
                                   config.master_seed, task.replica, opt);
      const auto t1 = std::chrono::steady_clock::now();
      elapsed_ms[task.grid_index] +=
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      (task.short_horizon ? short_speed : main_speed)[task.grid_index][task.replica] = run.speed();
      if (opt.log_trace) {
        std::lock_guard<std::mutex> lock(trace_mutex);
        trace = std::move(run.trace);
      }
    } catch (const RunError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(describe_point(g) + ": " + e.what());
    }
  });

  std::vector<ResultRow> rows;
  rows.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const GridPoint& point = grid[g];
    ResultRow row;
    row.model = point.params.model;
    row.lambda = point.params.lambda;
    row.alpha = point.params.alpha;
    row.q = point.q_shown;
    row.lambda_crit = point.crit_shown;
    row.steps = config.steps;
    row.replicas = config.replicas;
    row.seed = config.master_seed;
    row.estimate = estimate_speed_values(main_speed[g], point.v_theory, config.steps);
    row.regime = point.zero_speed ? "zero_speed" : "positive";
    if (point.zero_speed && !short_speed[g].empty()) {
      const SpeedEstimate short_est = estimate_speed_values(short_speed[g], 0.0, short_steps);
      row.diagnostic = short_est.v_hat != 0.0 ? row.estimate.v_hat / short_est.v_hat : 0.0;
    } else {
      row.diagnostic = row.estimate.rel_err;
    }
    if (config.timing) row.wallclock_ms = elapsed_ms[g].load();
    rows.push_back(std::move(row));
  }

  if (config.format == OutputFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const ResultRow& row : rows) write_row_csv(out, row);
  } else {
    for (const ResultRow& row : rows) write_row_jsonl(out, row);
  }

  if (!config.dump_env_path.empty()) {
    std::ofstream env_out(config.dump_env_path);
    if (!env_out) throw RunError("cannot open --dump-env path " + config.dump_env_path);
    const PointParams& p = grid.front().params;
    const ReplicaKey seed{config.master_seed, 0};
    TrapEnvironment env =
        p.model == Model::Bouchaud
            ? TrapEnvironment::pareto_iid(p.alpha, seed)
            : (p.model == Model::CombReduced || p.model == Model::CombGraph
                   ? TrapEnvironment::comb_geometric(p.alpha, p.q, p.lambda, seed)
                   : TrapEnvironment::ladder_markov(p.alpha, p.q, p.lambda, seed));
    for (std::int64_t x = 0; x < 4096; ++x) env.site(x);
    env.dump(env_out);
  }
  if (want_trace) {
    std::ofstream trace_out(config.dump_trace_path);
    if (!trace_out) throw RunError("cannot open --dump-trace path " + config.dump_trace_path);
    for (const TraceSample& s : trace)
      trace_out << s.step << '\t' << format_double(s.clock) << '\t' << s.position << '\n';
  }
  return rows;
}

void emit_speed_curve(const ExperimentConfig& config, std::ostream& out) {
  validate_config(config);
  const double crit = *config.lambda_crit;
  const bool simulate = config.steps > 0 && config.replicas >= 2;
  out << "# lambda\tv_theory" << (simulate ? "\tv_hat" : "") << '\n';
  for (double lambda : config.lambda) {
    const double v_theory = speed_example2_crit(lambda, crit);
    out << format_double(lambda) << '\t' << format_double(v_theory);
    if (simulate) {
      std::vector<double> speeds(config.replicas);
      const PointParams point{Model::Bouchaud, lambda, lambda > 0.0 ? crit / lambda : 0.0, 0.0};
      parallel_for(config.replicas, config.threads, [&](std::size_t r) {
        if (lambda <= 0.0) {
          speeds[r] = 0.0;
          return;
        }
        speeds[r] = run_model_once(point, config.steps, config.master_seed,
                                   static_cast<std::uint32_t>(r))
                        .speed();
      });
      double mean = 0.0;
      for (double v : speeds) mean += v;
      out << '\t' << format_double(mean / static_cast<double>(config.replicas));
    }
    out << '\n';
  }
}

}  // namespace trapwalk
