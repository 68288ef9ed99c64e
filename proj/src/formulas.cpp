#include "trapwalk/formulas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trapwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// e^alpha - e^{2*lambda} evaluated as e^{2*lambda} * expm1(alpha - 2*lambda)
// to avoid cancellation near the phase boundary lambda = alpha/2.
double exp_gap(double lambda, double alpha) {
  return std::exp(2.0 * lambda) * std::expm1(alpha - 2.0 * lambda);
}

}  // namespace

double p_right(double lambda) {
  require(lambda >= 0.0, "p_right: lambda must be >= 0");
  return 1.0 / (1.0 + std::exp(-2.0 * lambda));
}

double p_esc(double lambda) {
  require(lambda >= 0.0, "p_esc: lambda must be >= 0");
  return std::tanh(lambda);
}

double speed_theorem(double lambda, double mean_w) {
  require(lambda >= 0.0, "speed_theorem: lambda must be >= 0");
  require(mean_w > 0.0, "speed_theorem: mean_w must be positive (or +inf)");
  if (std::isinf(mean_w)) return 0.0;
  return p_esc(lambda) / mean_w;
}

double mean_excursion(std::int32_t len, double lambda) {
  require(len >= 1, "mean_excursion: len must be >= 1");
  require(lambda > 0.0, "mean_excursion: lambda must be positive");
  return 2.0 * std::expm1(2.0 * lambda * len) / std::expm1(2.0 * lambda);
}

double mean_sojourn(std::int32_t len, double lambda, double q) {
  require(len >= 0, "mean_sojourn: len must be >= 0");
  require(q > 0.0 && q < 1.0, "mean_sojourn: q must be in (0,1)");
  if (len == 0) return 1.0;
  return 1.0 + (1.0 - q) / q * mean_excursion(len, lambda);
}

double mean_w_comb(double lambda, double alpha, double q) {
  require(lambda > 0.0 && alpha > 0.0, "mean_w_comb: lambda and alpha must be positive");
  require(q > 0.0 && q < 1.0, "mean_w_comb: q must be in (0,1)");
  if (lambda >= alpha / 2.0) return kInf;
  return 1.0 + 2.0 * (1.0 - q) / q / exp_gap(lambda, alpha);
}

double mean_w_ladder(double lambda, double alpha, double q) {
  require(lambda > 0.0 && alpha > 0.0, "mean_w_ladder: lambda and alpha must be positive");
  require(q > 0.0 && q < 1.0, "mean_w_ladder: q must be in (0,1)");
  if (lambda >= alpha / 2.0) return kInf;
  const double density = 1.0 + std::exp(-2.0 * alpha) / -std::expm1(-alpha);
  return 1.0 + 2.0 * (1.0 - q) / q / (exp_gap(lambda, alpha) * density);
}

double speed_example1(double lambda, double alpha, double q) {
  require(lambda > 0.0 && alpha > 0.0, "speed_example1: lambda and alpha must be positive");
  require(q > 0.0 && q < 1.0, "speed_example1: q must be in (0,1)");
  if (lambda >= alpha / 2.0) return 0.0;
  const double gap = exp_gap(lambda, alpha);
  return p_esc(lambda) * gap / (gap + 2.0 * (1.0 - q) / q);
}

double speed_example2(double lambda, double alpha) {
  require(lambda >= 0.0, "speed_example2: lambda must be >= 0");
  require(alpha > 0.0, "speed_example2: alpha must be positive");
  if (alpha <= 1.0) return 0.0;
  return p_esc(lambda) * (alpha - 1.0) / alpha;
}

double speed_example2_crit(double lambda, double lambda_crit) {
  require(lambda >= 0.0, "speed_example2_crit: lambda must be >= 0");
  require(lambda_crit > 0.0, "speed_example2_crit: lambda_crit must be positive");
  if (lambda >= lambda_crit) return 0.0;
  return p_esc(lambda) * (lambda_crit - lambda) / lambda_crit;
}

double speed_example3(double lambda, double alpha, double q) {
  return speed_theorem(lambda, mean_w_ladder(lambda, alpha, q));
}

double expected_visits(double lambda) {
  require(lambda > 0.0, "expected_visits: lambda must be positive");
  return 1.0 / std::tanh(lambda);
}

double expected_site_time(double lambda, double mean_w) {
  require(mean_w > 0.0, "expected_site_time: mean_w must be positive");
  if (std::isinf(mean_w)) return kInf;
  return expected_visits(lambda) * mean_w;
}

}  // namespace trapwalk
