#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so results do not depend on call order or on the
// standard library's distribution implementations.
//
// Algorithm: key = splitmix64(seed ^ (stream * 0xD1B54A32D192ED03));
// bits = splitmix64(key + (counter + 1) * 0x9E3779B97F4A7C15);
// uniform = ((bits >> 11) + 0.5) * 2^-53, which lies strictly inside (0,1).
// Normals use Box-Muller on the uniforms at counters 2k and 2k+1 (cosine
// branch only).

#include <cstdint>

namespace anytime::rng {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;
  double normal(std::uint64_t index) const;

 private:
  std::uint64_t key_;
};

/// Well-known stream ids so independent quantities never share draws.
enum Stream : std::uint64_t {
  reality_noise = 1,
  outcomes = 2,
  stopping_times = 3,
  null_reality = 4,
  experiment = 5,
};

}  // namespace anytime::rng
