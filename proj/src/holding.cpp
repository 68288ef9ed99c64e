#include "trapwalk/holding.hpp"

#include <cmath>
#include <stdexcept>

#include "trapwalk/formulas.hpp"

namespace trapwalk {

double sample_exponential(double mean, RandomStream& stream) {
  if (!(mean > 0.0)) throw std::invalid_argument("sample_exponential: mean must be positive");
  return -mean * std::log(stream.next_uniform());
}

std::uint64_t sample_trap_excursion(std::int32_t len, double lambda, RandomStream& stream) {
  if (len < 1) throw std::invalid_argument("sample_trap_excursion: len must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_trap_excursion: lambda must be positive");
  const double p_back = 1.0 - p_right(lambda);  // move toward the exit
  std::int32_t depth = 1;
  std::uint64_t t = 1;  // the entering step
  while (depth != 0) {
    if (depth == len) {
      --depth;  // dead end: forced back
    } else {
      depth += stream.next_uniform() > p_back ? 1 : -1;
    }
    ++t;
  }
  return t;
}

double sample_site_sojourn(std::int32_t len, double lambda, double q, RandomStream& stream) {
  if (len < 0) throw std::invalid_argument("sample_site_sojourn: len must be >= 0");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("sample_site_sojourn: q must be in (0,1)");
  if (len == 0) return 1.0;
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_site_sojourn: lambda must be positive");
  // N entries before the horizontal move, P(N = n) = (1-q)^n q.
  const std::uint64_t entries =
      static_cast<std::uint64_t>(std::log(stream.next_uniform()) / std::log1p(-q));
  double total = 1.0;
  for (std::uint64_t k = 0; k < entries; ++k)
    total += static_cast<double>(sample_trap_excursion(len, lambda, stream));
  return total;
}

double HoldingTimeModel::sample(const SiteInfo& site, RandomStream& stream) const {
  switch (kind) {
    case HoldingKind::Exponential:
      return sample_exponential(site.w, stream);
    case HoldingKind::TrapCompound:
      return sample_site_sojourn(site.trap_len, lambda, q, stream);
    case HoldingKind::Deterministic:
      return site.w;
  }
  throw std::logic_error("HoldingTimeModel: unknown kind");
}

}  // namespace trapwalk
