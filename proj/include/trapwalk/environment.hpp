// Quenched random environments on Z: the mean waiting time w_x and trap
// length at every site, for the three model families.
//
//   ParetoIid     w_x = U^{-1/alpha} i.i.d., P(w >= t) = t^{-alpha} for t >= 1
//   CombGeometric i.i.d. geometric trap lengths, w_x = mean_sojourn(L_x)
//   LadderMarkov  non-overlapping traps driven by the remaining-length
//                 Markov chain Z_x started from its invariant measure
//
// Sites are generated lazily and deterministically: the value at a site is a
// pure function of (master_seed, replica, site) for the i.i.d. kinds, and of
// the seeded left-to-right chain for the ladder kind.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trapwalk/rng.hpp"

namespace trapwalk {

enum class EnvKind { ParetoIid, CombGeometric, LadderMarkov };

struct SiteInfo {
  double w = 0.0;            // mean waiting time; > 0 once generated
  std::int32_t trap_len = 0; // 0 on trap-free sites
  std::int32_t z = -1;       // remaining-length chain state (ladder only)
};

// Truncated probability weights pi(0), pi(1), ... of the remaining-length
// chain, plus the worst balance-equation residual as a quality certificate.
struct InvariantMeasure {
  std::vector<double> weights;
  double max_residual = 0.0;
  double truncated_tail = 0.0;
};

// P(L = l) for l = 0..n, geometric with success 1 - e^{-alpha}, truncated
// where the remaining tail mass drops below tail_mass and renormalized.
std::vector<double> geometric_trap_pmf(double alpha, double tail_mass = 1e-14);

// Solves pi(0)P(L=0) + pi(1)P(L=0) = pi(0) and
// pi(0)P(L=j) + pi(1)P(L=j) + pi(j+1) = pi(j) for j >= 1:
// pi(0) = P(L=0)/(P(L=0)+E[L]), pi(j) = P(L>=j)/(P(L=0)+E[L]).
InvariantMeasure solve_invariant_pi(const std::vector<double>& trap_pmf, double tol = 1e-12);

// Law of the trap length rooted at a fixed site under the stationary chain:
// P(Lam = j) = P(L = j)(pi0 + pi1) + [j == 0](1 - pi0 - pi1).
std::vector<double> lambda_marginal(const std::vector<double>& trap_pmf,
                                    const InvariantMeasure& pi);

class TrapEnvironment {
 public:
  static TrapEnvironment pareto_iid(double alpha, ReplicaKey seed);
  static TrapEnvironment comb_geometric(double alpha, double q, double lambda, ReplicaKey seed);
  // The ladder chain is anchored at a stationary draw left_margin sites left
  // of the origin and only extends rightward; querying below the anchor throws.
  static TrapEnvironment ladder_markov(double alpha, double q, double lambda, ReplicaKey seed,
                                       std::int64_t left_margin = 4096);

  // Lazy, deterministic site access.
  const SiteInfo& site(std::int64_t x);

  EnvKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double q() const { return q_; }
  double lambda() const { return lambda_; }

  // One line per realized site, ascending: "site\ttrap_len\tw" with 17
  // significant digits.
  void dump(std::ostream& os) const;

 private:
  TrapEnvironment(EnvKind kind, double alpha, double q, double lambda, ReplicaKey seed);

  const SiteInfo& generate_iid(std::int64_t x);
  void extend_ladder(std::int64_t x);

  EnvKind kind_;
  double alpha_ = 0.0;
  double q_ = 0.0;
  double lambda_ = 0.0;
  ReplicaKey seed_;

  // Two-sided lazy storage; w == 0 marks a not-yet-generated slot.
  std::vector<SiteInfo> fwd_;  // sites >= 0
  std::vector<SiteInfo> bwd_;  // site x < 0 lives at bwd_[-1 - x]

  // Ladder chain bookkeeping.
  std::int64_t ladder_lo_ = 0;    // leftmost queryable site
  std::int64_t ladder_next_ = 0;  // first not-yet-generated site
  std::int32_t z_prev_ = 0;       // chain state at ladder_next_ - 1
  std::vector<double> pi_cdf_;    // stationary CDF for the anchor draw
};

}  // namespace trapwalk
