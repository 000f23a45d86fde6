#pragma once

#include <cstdint>

namespace tcff {

namespace detail {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based uniform stream keyed by (master_seed, stream_index).
/// Stream i never depends on how many other streams exist or in which order
/// they are drawn, so ensemble results are independent of thread schedule.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t s = master_seed;
    const std::uint64_t a = detail::splitmix64_step(s);
    s = a ^ (0xD1B54A32D192ED03ULL * (stream_index + 1));
    (void)detail::splitmix64_step(s);
    state_ = s;
  }

  std::uint64_t next_u64() { return detail::splitmix64_step(state_); }

  /// Uniform on [0, 1) with 53-bit resolution; identical across platforms.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace tcff
