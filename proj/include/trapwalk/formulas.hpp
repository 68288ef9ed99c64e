// Closed-form evaluators for the trap-walk model: escape probability, the
// speed law v = p_esc(lambda)/E[w0], per-model mean waiting times and the
// resulting speed curves, and the visit/occupation identities.
//
// mean_w values may be +inf (heavy-trap regime); speeds then evaluate to 0.

#pragma once

#include <cstdint>

namespace trapwalk {

// Right-step probability p_lambda = e^l / (e^l + e^-l).
double p_right(double lambda);

// Escape probability of the biased walk from its start: 2*p_lambda - 1 = tanh(lambda).
double p_esc(double lambda);

// Speed of the time-changed walk: p_esc(lambda) / mean_w. mean_w = +inf gives 0.
double speed_theorem(double lambda, double mean_w);

// Expected time to leave a depth-len trap after stepping into it:
// 2*(e^{2*lambda*len} - 1)/(e^{2*lambda} - 1). len >= 1.
double mean_excursion(std::int32_t len, double lambda);

// Expected total time spent at a backbone site with a trap of length len,
// counting repeated entries: 1 + (2(1-q)/q)*(e^{2*lambda*len}-1)/(e^{2*lambda}-1).
// len = 0 gives exactly 1.
double mean_sojourn(std::int32_t len, double lambda, double q);

// E[w0] for the comb family (geometric trap lengths with rate alpha):
// 1 + (2(1-q)/q)/(e^alpha - e^{2*lambda}) for lambda < alpha/2, else +inf.
double mean_w_comb(double lambda, double alpha, double q);

// E[w0] for the ladder family (non-overlapping traps):
// 1 + (2(1-q)/q) / ((e^alpha - e^{2*lambda}) * (1 + e^{-2*alpha}/(1 - e^{-alpha})))
// for lambda < alpha/2, else +inf.
double mean_w_ladder(double lambda, double alpha, double q);

// Comb-graph speed: tanh(lambda)*(e^a - e^{2l})/(e^a - e^{2l} + 2(1-q)/q),
// zero iff lambda >= alpha/2.
double speed_example1(double lambda, double alpha, double q);

// Bouchaud speed with Pareto(alpha) waiting-time tails: tanh(lambda)*(alpha-1)^+/alpha.
double speed_example2(double lambda, double alpha);

// Same with the drift-dependent tail alpha = lambda_crit/lambda:
// tanh(lambda)*(lambda_crit - lambda)^+/lambda_crit.
double speed_example2_crit(double lambda, double lambda_crit);

// Ladder-graph speed: tanh(lambda)/mean_w_ladder, zero iff lambda >= alpha/2.
double speed_example3(double lambda, double alpha, double q);

// Expected number of visits to a site, initial arrival included: 1/tanh(lambda).
double expected_visits(double lambda);

// Expected total occupation time of a site: expected_visits(lambda) * mean_w.
double expected_site_time(double lambda, double mean_w);

}  // namespace trapwalk
