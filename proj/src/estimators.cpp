#include "trapwalk/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace trapwalk {

namespace {

constexpr double kZ95 = 1.96;
constexpr double kRelErrFloor = 1e-12;

SpeedEstimate from_samples(const std::vector<double>& v, double v_theory,
                           std::uint64_t steps_per_replica) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double half = kZ95 * sd / std::sqrt(static_cast<double>(n));

  SpeedEstimate est;
  est.v_hat = mean;
  est.ci_low = mean - half;
  est.ci_high = mean + half;
  est.replicas = static_cast<std::uint32_t>(n);
  est.steps_per_replica = steps_per_replica;
  est.v_theory = v_theory;
  est.rel_err = std::abs(mean - v_theory) / std::max(v_theory, kRelErrFloor);
  return est;
}

}  // namespace

SpeedEstimate estimate_speed_values(std::span<const double> speeds, double v_theory,
                                    std::uint64_t steps_per_replica) {
  if (speeds.size() < 2)
    throw std::invalid_argument("estimate_speed: need at least 2 replicas");
  return from_samples(std::vector<double>(speeds.begin(), speeds.end()), v_theory,
                      steps_per_replica);
}

SpeedEstimate estimate_speed(std::span<const WalkRun> runs, double v_theory) {
  if (runs.size() < 2) throw std::invalid_argument("estimate_speed: need at least 2 replicas");
  std::vector<double> v;
  v.reserve(runs.size());
  for (const WalkRun& r : runs) {
    if (!(r.elapsed_clock > 0.0))
      throw std::invalid_argument("estimate_speed: run with non-positive clock");
    v.push_back(r.speed());
  }
  return from_samples(v, v_theory, runs.front().steps);
}

SpeedEstimate estimate_speed_batch_means(const WalkRun& run, double v_theory) {
  if (run.checkpoints.size() < 2)
    throw std::invalid_argument("estimate_speed_batch_means: need >= 2 checkpoints");
  std::vector<double> v;
  v.reserve(run.checkpoints.size());
  TraceSample prev{0, 0.0, 0};
  for (const TraceSample& cp : run.checkpoints) {
    const double dt = cp.clock - prev.clock;
    if (!(dt > 0.0))
      throw std::invalid_argument("estimate_speed_batch_means: empty batch");
    v.push_back(static_cast<double>(cp.position - prev.position) / dt);
    prev = cp;
  }
  return from_samples(v, v_theory, run.steps);
}

double estimate_regeneration_density(const WalkRun& run) {
  const RegenerationScan scan = detect_regenerations(run);
  const std::int64_t window = scan.window_hi - scan.window_lo;
  if (window < 100000)
    throw std::invalid_argument("estimate_regeneration_density: resolved window below 1e5 sites");
  const std::int64_t scanned = window + scan.unresolved;
  if (static_cast<double>(scan.unresolved) > 0.01 * static_cast<double>(scanned))
    throw std::invalid_argument("estimate_regeneration_density: more than 1% unresolved sites");
  return static_cast<double>(scan.sites.size()) / static_cast<double>(window);
}

SiteAverages estimate_visits_and_site_time(std::span<const WalkRun> runs) {
  if (runs.empty()) throw std::invalid_argument("estimate_visits_and_site_time: no runs");
  double visits = 0.0, time = 0.0;
  std::int64_t sites = 0;
  for (const WalkRun& run : runs) {
    if (!run.sites.with_times())
      throw std::invalid_argument("estimate_visits_and_site_time: site stats not recorded");
    const RegenerationScan scan = detect_regenerations(run);
    const std::int64_t scanned = scan.window_hi - scan.window_lo + scan.unresolved;
    if (static_cast<double>(scan.unresolved) > 0.01 * static_cast<double>(scanned))
      throw std::invalid_argument("estimate_visits_and_site_time: more than 1% unresolved sites");
    for (std::int64_t x = scan.window_lo; x < scan.window_hi; ++x) {
      visits += run.sites.visits(x);
      time += run.sites.site_time(x);
      ++sites;
    }
  }
  if (sites == 0) throw std::invalid_argument("estimate_visits_and_site_time: empty window");
  SiteAverages out;
  out.mean_visits = visits / static_cast<double>(sites);
  out.mean_site_time = time / static_cast<double>(sites);
  out.sites = sites;
  return out;
}

double estimate_speed_regenerative(const WalkRun& run) {
  if (!run.sites.with_times())
    throw std::invalid_argument("estimate_speed_regenerative: site stats not recorded");
  const RegenerationScan scan = detect_regenerations(run);
  if (scan.sites.size() < 100)
    throw std::invalid_argument("estimate_speed_regenerative: fewer than 100 regeneration points");
  const std::int64_t site = scan.sites.back();
  const double arrival_clock = run.sites.first_clock(site);
  if (!(arrival_clock > 0.0))
    throw std::invalid_argument("estimate_speed_regenerative: degenerate arrival clock");
  return static_cast<double>(site) / arrival_clock;
}

}  // namespace trapwalk
