#include "trapwalk/environment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "trapwalk/formulas.hpp"

namespace trapwalk {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Geometric on N0 with P(X >= n) = s^n, sampled by inversion.
std::int64_t sample_geometric_tail(double log_s, double u) {
  return static_cast<std::int64_t>(std::log(u) / log_s);
}

}  // namespace

std::vector<double> geometric_trap_pmf(double alpha, double tail_mass) {
  require(alpha > 0.0, "geometric_trap_pmf: alpha must be positive");
  require(tail_mass > 0.0, "geometric_trap_pmf: tail_mass must be positive");
  // P(L >= n) = e^{-alpha n}; stop once the tail is below tail_mass.
  const double n_cut = std::ceil(-std::log(tail_mass) / alpha);
  if (n_cut > 1e8)
    throw std::runtime_error("geometric_trap_pmf: alpha too small to resolve the tail");
  const std::size_t n = static_cast<std::size_t>(n_cut);
  std::vector<double> pmf(n + 1);
  const double success = -std::expm1(-alpha);  // 1 - e^{-alpha}
  double total = 0.0;
  for (std::size_t l = 0; l <= n; ++l) {
    pmf[l] = success * std::exp(-alpha * static_cast<double>(l));
    total += pmf[l];
  }
  for (auto& p : pmf) p /= total;
  return pmf;
}

InvariantMeasure solve_invariant_pi(const std::vector<double>& trap_pmf, double tol) {
  require(!trap_pmf.empty(), "solve_invariant_pi: empty pmf");
  double p0 = trap_pmf[0];
  double mean = 0.0, mass = 0.0;
  for (std::size_t l = 0; l < trap_pmf.size(); ++l) {
    require(trap_pmf[l] >= 0.0, "solve_invariant_pi: negative probability");
    mean += static_cast<double>(l) * trap_pmf[l];
    mass += trap_pmf[l];
  }
  if (!(std::isfinite(mean)) || mass < 1.0 - 1e-9)
    throw std::runtime_error("solve_invariant_pi: trap-length mean unresolved under truncation");

  const double denom = p0 + mean;
  InvariantMeasure pi;
  pi.weights.resize(trap_pmf.size() + 1);
  pi.weights[0] = p0 / denom;
  // P(L >= j) by downward partial sums for accuracy in the tail.
  double tail = 0.0;
  std::vector<double> survival(trap_pmf.size() + 1, 0.0);
  for (std::size_t j = trap_pmf.size(); j >= 1; --j) {
    tail += trap_pmf[j - 1];
    survival[j - 1] = tail;
  }
  for (std::size_t j = 1; j < pi.weights.size(); ++j)
    pi.weights[j] = (j < survival.size() ? survival[j] : 0.0) / denom;

  // Drop the negligible tail and renormalize.
  double cum = 0.0;
  std::size_t keep = pi.weights.size();
  for (std::size_t j = 0; j < pi.weights.size(); ++j) {
    cum += pi.weights[j];
    if (1.0 - cum < 1e-14) {
      keep = j + 1;
      break;
    }
  }
  pi.truncated_tail = 1.0 - cum;
  pi.weights.resize(keep);
  double total = 0.0;
  for (double w : pi.weights) total += w;
  for (auto& w : pi.weights) w /= total;

  // Balance-equation residuals certify the solution.
  auto pmf_at = [&](std::size_t j) { return j < trap_pmf.size() ? trap_pmf[j] : 0.0; };
  auto pi_at = [&](std::size_t j) { return j < pi.weights.size() ? pi.weights[j] : 0.0; };
  double worst = std::abs((pi_at(0) + pi_at(1)) * pmf_at(0) - pi_at(0));
  for (std::size_t j = 1; j + 1 < pi.weights.size(); ++j) {
    const double lhs = (pi_at(0) + pi_at(1)) * pmf_at(j) + pi_at(j + 1);
    worst = std::max(worst, std::abs(lhs - pi_at(j)));
  }
  pi.max_residual = worst;
  if (worst > tol)
    throw std::runtime_error("solve_invariant_pi: balance residual exceeds tolerance");
  return pi;
}

std::vector<double> lambda_marginal(const std::vector<double>& trap_pmf,
                                    const InvariantMeasure& pi) {
  require(!trap_pmf.empty(), "lambda_marginal: empty pmf");
  require(!pi.weights.empty(), "lambda_marginal: empty invariant measure");
  const double head = pi.weights[0] + (pi.weights.size() > 1 ? pi.weights[1] : 0.0);
  std::vector<double> out(trap_pmf.size());
  for (std::size_t j = 0; j < trap_pmf.size(); ++j) out[j] = trap_pmf[j] * head;
  out[0] += 1.0 - head;
  return out;
}

TrapEnvironment::TrapEnvironment(EnvKind kind, double alpha, double q, double lambda,
                                 ReplicaKey seed)
    : kind_(kind), alpha_(alpha), q_(q), lambda_(lambda), seed_(seed) {}

TrapEnvironment TrapEnvironment::pareto_iid(double alpha, ReplicaKey seed) {
  require(alpha > 0.0, "pareto_iid: alpha must be positive");
  return TrapEnvironment(EnvKind::ParetoIid, alpha, 0.0, 0.0, seed);
}

TrapEnvironment TrapEnvironment::comb_geometric(double alpha, double q, double lambda,
                                                ReplicaKey seed) {
  require(alpha > 0.0, "comb_geometric: alpha must be positive");
  require(q > 0.0 && q < 1.0, "comb_geometric: q must be in (0,1)");
  require(lambda > 0.0, "comb_geometric: lambda must be positive");
  return TrapEnvironment(EnvKind::CombGeometric, alpha, q, lambda, seed);
}

TrapEnvironment TrapEnvironment::ladder_markov(double alpha, double q, double lambda,
                                               ReplicaKey seed, std::int64_t left_margin) {
  require(alpha > 0.0, "ladder_markov: alpha must be positive");
  require(q > 0.0 && q < 1.0, "ladder_markov: q must be in (0,1)");
  require(lambda > 0.0, "ladder_markov: lambda must be positive");
  require(left_margin >= 0, "ladder_markov: left_margin must be >= 0");
  TrapEnvironment env(EnvKind::LadderMarkov, alpha, q, lambda, seed);
  env.ladder_lo_ = -left_margin;
  env.ladder_next_ = env.ladder_lo_;

  const auto pmf = geometric_trap_pmf(alpha);
  const auto pi = solve_invariant_pi(pmf);
  env.pi_cdf_.resize(pi.weights.size());
  double cum = 0.0;
  for (std::size_t j = 0; j < pi.weights.size(); ++j) {
    cum += pi.weights[j];
    env.pi_cdf_[j] = cum;
  }
  // Stationary anchor Z at site ladder_lo_ - 1.
  RandomStream s = stream_for(seed, Channel::Env, env.ladder_lo_ - 1, 0);
  const double u = s.next_uniform();
  std::int32_t z = 0;
  while (z + 1 < static_cast<std::int32_t>(env.pi_cdf_.size()) &&
         u > env.pi_cdf_[static_cast<std::size_t>(z)])
    ++z;
  env.z_prev_ = z;
  return env;
}

const SiteInfo& TrapEnvironment::site(std::int64_t x) {
  if (kind_ == EnvKind::LadderMarkov) {
    if (x < ladder_lo_)
      throw std::runtime_error("ladder environment queried left of its anchor window");
    if (x >= ladder_next_) extend_ladder(x);
    auto& side = x >= 0 ? fwd_ : bwd_;
    return side[static_cast<std::size_t>(x >= 0 ? x : -1 - x)];
  }
  return generate_iid(x);
}

const SiteInfo& TrapEnvironment::generate_iid(std::int64_t x) {
  auto& side = x >= 0 ? fwd_ : bwd_;
  const std::size_t i = static_cast<std::size_t>(x >= 0 ? x : -1 - x);
  if (i >= side.size()) side.resize(i + 1);
  SiteInfo& info = side[i];
  if (info.w > 0.0) return info;

  RandomStream s = stream_for(seed_, Channel::Env, x, 0);
  const double u = s.next_uniform();
  if (kind_ == EnvKind::ParetoIid) {
    info.w = std::pow(u, -1.0 / alpha_);
    info.trap_len = 0;
  } else {
    const std::int64_t len = sample_geometric_tail(-alpha_, u);
    info.trap_len = static_cast<std::int32_t>(len);
    info.w = mean_sojourn(info.trap_len, lambda_, q_);
  }
  return info;
}

void TrapEnvironment::extend_ladder(std::int64_t x) {
  while (ladder_next_ <= x) {
    const std::int64_t cur = ladder_next_;
    std::int32_t z;
    if (z_prev_ > 1) {
      z = z_prev_ - 1;  // forced decrement inside a trap's footprint
    } else {
      RandomStream s = stream_for(seed_, Channel::Env, cur, 0);
      z = static_cast<std::int32_t>(sample_geometric_tail(-alpha_, s.next_uniform()));
    }
    const std::int32_t len = z >= z_prev_ ? z : 0;  // f(z_prev, z)

    auto& side = cur >= 0 ? fwd_ : bwd_;
    const std::size_t i = static_cast<std::size_t>(cur >= 0 ? cur : -1 - cur);
    if (i >= side.size()) side.resize(i + 1);
    side[i] = SiteInfo{mean_sojourn(len, lambda_, q_), len, z};

    z_prev_ = z;
    ++ladder_next_;
  }
}

void TrapEnvironment::dump(std::ostream& os) const {
  char line[96];
  for (std::size_t i = bwd_.size(); i > 0; --i) {
    const SiteInfo& s = bwd_[i - 1];
    if (s.w <= 0.0) continue;
    std::snprintf(line, sizeof line, "%lld\t%d\t%.17g\n",
                  static_cast<long long>(-static_cast<std::int64_t>(i)), s.trap_len, s.w);
    os << line;
  }
  for (std::size_t i = 0; i < fwd_.size(); ++i) {
    const SiteInfo& s = fwd_[i];
    if (s.w <= 0.0) continue;
    std::snprintf(line, sizeof line, "%lld\t%d\t%.17g\n", static_cast<long long>(i), s.trap_len,
                  s.w);
    os << line;
  }
}

}  // namespace trapwalk
