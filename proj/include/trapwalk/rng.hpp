// Deterministic, coordinate-addressed random substreams.
//
// Every (replica, site, visit, channel) tuple maps to its own substream by
// hashing the coordinates into a 64-bit SplitMix64 state. No per-site state
// is stored, so sites may be visited in any order over the whole of Z and
// still see the same randomness for a given master seed.

#pragma once

#include <cstdint>

namespace trapwalk {

// Separates the uses of randomness at the same (site, visit) coordinate:
// Step drives the backbone direction, Trap the in-trap moves, Hold the
// holding-time draw, Env the quenched environment at a site.
enum class Channel : std::uint8_t { Step = 0, Trap = 1, Hold = 2, Env = 3 };

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t replica = 0;
  std::int64_t site = 0;
  std::uint64_t visit = 0;
  Channel channel = Channel::Step;
};

// Identifies one replica's randomness; all stream keys of a replica share it.
struct ReplicaKey {
  std::uint64_t master_seed = 0;
  std::uint32_t replica = 0;
};

namespace detail {

// SplitMix64 finalizer (Steele/Lea/Flood via Vigna). Bijective on u64.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t zigzag(std::int64_t x) {
  return (static_cast<std::uint64_t>(x) << 1) ^ static_cast<std::uint64_t>(x >> 63);
}

inline constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

}  // namespace detail

// Stateful stream of uniforms; value-like, one owner at a time.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next_u64() {
    state_ += detail::GOLDEN;
    return detail::mix64(state_);
  }

  // Uniform on the open interval (0,1), 53-bit resolution. The +0.5 offset
  // keeps both endpoints strictly excluded.
  constexpr double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Absorbs the key fields one at a time with a full mix between rounds, so
// algebraic relations between fields cannot line up into collisions.
inline constexpr RandomStream derive_stream(const StreamKey& key) {
  using namespace detail;
  std::uint64_t s = mix64(key.master_seed ^ 0x6A09E667F3BCC909ull);
  s = mix64(s + GOLDEN + key.replica);
  s = mix64(s + 0xD1B54A32D192ED03ull + zigzag(key.site));
  s = mix64(s + 0x8CB92BA72F3D8DD7ull + key.visit);
  s = mix64(s + 0xEB44ACCAB455D165ull + static_cast<std::uint64_t>(key.channel));
  return RandomStream(s);
}

inline constexpr RandomStream stream_for(ReplicaKey rk, Channel ch, std::int64_t site,
                                         std::uint64_t visit) {
  return derive_stream(StreamKey{rk.master_seed, rk.replica, site, visit, ch});
}

inline double next_uniform(RandomStream& stream) { return stream.next_uniform(); }

}  // namespace trapwalk
