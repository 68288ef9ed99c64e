// Sojourn-time samplers. Every sampler draws a positive time whose mean is
// the site's w value: exponential (Bouchaud), compound trap excursions
// (comb/ladder), or the mean itself (deterministic).

#pragma once

#include <cstdint>

#include "trapwalk/environment.hpp"
#include "trapwalk/rng.hpp"

namespace trapwalk {

// -mean * ln(U): exponential with the given mean.
double sample_exponential(double mean, RandomStream& stream);

// Explicit in-trap walk: one step into a depth-len trap, then deeper with
// probability p_lambda / back with 1 - p_lambda (forced back at the bottom)
// until the backbone is reached. Returns the total number of steps, which is
// always a positive even integer; len = 1 gives exactly 2.
std::uint64_t sample_trap_excursion(std::int32_t len, double lambda, RandomStream& stream);

// Total time spent at a backbone site per visit: 1 + sum of N independent
// excursions, N geometric on N0 with P(N = n) = (1-q)^n q. len = 0 returns 1.
double sample_site_sojourn(std::int32_t len, double lambda, double q, RandomStream& stream);

enum class HoldingKind { Exponential, TrapCompound, Deterministic };

struct HoldingTimeModel {
  HoldingKind kind = HoldingKind::Exponential;
  double lambda = 0.0;
  double q = 0.0;

  static HoldingTimeModel exponential() { return {HoldingKind::Exponential, 0.0, 0.0}; }
  static HoldingTimeModel trap_compound(double lambda, double q) {
    return {HoldingKind::TrapCompound, lambda, q};
  }
  static HoldingTimeModel deterministic() { return {HoldingKind::Deterministic, 0.0, 0.0}; }

  // Draws the sojourn for one visit to `site`; E[tau] equals site.w.
  double sample(const SiteInfo& site, RandomStream& stream) const;
};

}  // namespace trapwalk
