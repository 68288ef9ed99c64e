// Trajectory simulators: the reduced clock-process walk (backbone walk plus
// holding times) and the full comb/ladder graph walks, plus the regeneration
// scan over a finished run.
//
// All randomness is addressed per (site, visit) through the channel streams,
// so runs sharing a ReplicaKey share the same backbone skeleton across model
// variants.

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "trapwalk/environment.hpp"
#include "trapwalk/holding.hpp"
#include "trapwalk/rng.hpp"

namespace trapwalk {

struct StopRule {
  std::uint64_t max_steps = 0;  // 0 = unbounded
  double max_clock = std::numeric_limits<double>::infinity();

  static StopRule steps(std::uint64_t n) { return {n, std::numeric_limits<double>::infinity()}; }
  static StopRule clock(double t) { return {0, t}; }
};

struct RunOptions {
  bool site_stats = false;             // per-site occupation time + first-arrival clock
  bool log_trace = false;              // (step, clock, position) at powers of two
  std::uint32_t batch_checkpoints = 0; // linear checkpoints for batch-means
  std::uint64_t record_arrivals = 0;   // keep the first K backbone arrivals
};

struct TraceSample {
  std::uint64_t step = 0;
  double clock = 0.0;
  std::int64_t position = 0;
};

namespace detail {

// Dense storage over a two-sided range of sites; site x < 0 lives at -1-x in
// the negative arm. Unvisited slots read as T{}.
template <class T>
class TwoSided {
 public:
  T& at(std::int64_t x) {
    auto& side = x >= 0 ? fwd_ : bwd_;
    const std::size_t i = static_cast<std::size_t>(x >= 0 ? x : -1 - x);
    if (i >= side.size()) side.resize(i + 1);
    return side[i];
  }
  T get(std::int64_t x) const {
    const auto& side = x >= 0 ? fwd_ : bwd_;
    const std::size_t i = static_cast<std::size_t>(x >= 0 ? x : -1 - x);
    return i < side.size() ? side[i] : T{};
  }

 private:
  std::vector<T> fwd_, bwd_;
};

}  // namespace detail

// Per-site visit counts (always) and, when enabled, occupation times and
// first-arrival clock readings.
class SiteTable {
 public:
  SiteTable() = default;
  explicit SiteTable(bool with_times) : with_times_(with_times) {}

  std::uint32_t bump_visit(std::int64_t x) { return ++visits_.at(x); }
  void add_time(std::int64_t x, double dt) { time_.at(x) += dt; }
  void note_first_clock(std::int64_t x, double t) { first_.at(x) = t; }

  std::uint32_t visits(std::int64_t x) const { return visits_.get(x); }
  double site_time(std::int64_t x) const { return time_.get(x); }
  double first_clock(std::int64_t x) const { return first_.get(x); }
  bool with_times() const { return with_times_; }

 private:
  bool with_times_ = false;
  detail::TwoSided<std::uint32_t> visits_;
  detail::TwoSided<double> time_;
  detail::TwoSided<double> first_;
};

struct WalkRun {
  std::string model;
  double lambda = 0.0;
  std::int64_t final_position = 0;
  double elapsed_clock = 0.0;
  std::uint64_t steps = 0;           // graph runs: unit-time graph steps
  std::uint64_t backbone_moves = 0;  // equals steps for reduced runs
  SiteTable sites;
  std::vector<TraceSample> trace;        // log-spaced
  std::vector<TraceSample> checkpoints;  // linear, for batch means
  std::vector<std::int64_t> arrivals;    // first K backbone arrivals

  double speed() const { return elapsed_clock > 0.0 ? final_position / elapsed_clock : 0.0; }
};

// One backbone decision: position+1 with probability p_lambda, else position-1.
std::int64_t step_backbone(std::int64_t position, double lambda, RandomStream& stream);

// The time-changed walk: backbone skeleton plus one holding-time draw per
// visit, clock = sum of sojourns. Stops at the step bound (final arrival kept,
// its sojourn not drawn) or the clock bound (final sojourn included in full).
WalkRun run_reduced(TrapEnvironment& env, const HoldingTimeModel& hold, double lambda,
                    StopRule stop, ReplicaKey seed, const RunOptions& opt = {});

// Full walk on the backbone-with-vertical-traps graph; every move costs one
// clock unit. At a trapped backbone site: right q*p_lambda, left q*(1-p_lambda),
// into the trap 1-q; trap-free sites split p_lambda / 1-p_lambda.
WalkRun run_comb_graph(TrapEnvironment& env, double lambda, double q, std::uint64_t max_steps,
                       ReplicaKey seed, const RunOptions& opt = {});

// Same walk on the horizontal-trap (ladder) graph. The position is attributed
// to the trap's root site while inside a trap.
WalkRun run_ladder_graph(TrapEnvironment& env, double lambda, double q, std::uint64_t max_steps,
                         ReplicaKey seed, const RunOptions& opt = {});

struct RegenerationScan {
  std::vector<std::int64_t> sites;  // strictly increasing
  std::int64_t window_lo = 0;       // resolved scan window [window_lo, window_hi)
  std::int64_t window_hi = 0;
  std::int64_t unresolved = 0;      // right-margin sites dropped
};

// Sites whose status could still flip have return probability below 1e-12
// once the walk ends this many sites to their right.
std::int64_t regeneration_margin(double lambda);

// A site is a regeneration point iff the walk never comes back to it or below
// after the first hit; on a nearest-neighbor path that is exactly one visit.
RegenerationScan detect_regenerations(const WalkRun& run);

}  // namespace trapwalk
