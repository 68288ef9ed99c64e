// Turns finished runs into speed estimates with uncertainty, and the
// regeneration-based empirical quantities used to cross-check them.

#pragma once

#include <cstdint>
#include <span>

#include "trapwalk/walk.hpp"

namespace trapwalk {

struct SpeedEstimate {
  double v_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint32_t replicas = 0;
  std::uint64_t steps_per_replica = 0;
  double v_theory = 0.0;
  double rel_err = 0.0;  // |v_hat - v_theory| / max(v_theory, 1e-12)
};

// Across-replica mean with a 95% normal CI (quantile 1.96). Needs >= 2 runs.
SpeedEstimate estimate_speed(std::span<const WalkRun> runs, double v_theory);

// Same on raw per-replica speeds (the runner keeps only these).
SpeedEstimate estimate_speed_values(std::span<const double> speeds, double v_theory,
                                    std::uint64_t steps_per_replica);

// Secondary uncertainty method: batch means over one trace's linear
// checkpoints (run with RunOptions::batch_checkpoints = 32).
SpeedEstimate estimate_speed_batch_means(const WalkRun& run, double v_theory);

// Fraction of resolved sites that are regeneration points. Rejects scans with
// fewer than 100000 resolved sites or more than 1% unresolved.
double estimate_regeneration_density(const WalkRun& run);

struct SiteAverages {
  double mean_visits = 0.0;
  double mean_site_time = 0.0;
  std::int64_t sites = 0;
};

// Site-averaged visit count and occupation time over the resolved windows of
// the given runs (site stats required).
SiteAverages estimate_visits_and_site_time(std::span<const WalkRun> runs);

// Regenerative speed: last resolved regeneration site over the clock at its
// first arrival. Requires >= 100 resolved regeneration points and site stats.
double estimate_speed_regenerative(const WalkRun& run);

}  // namespace trapwalk
