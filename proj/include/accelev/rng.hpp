#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace accelev {

// splitmix64; used to derive independent per-stage seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. Uniforms come straight off mt19937_64 (53-bit
// mantissa construction) and normals via Box-Muller without a spare cache, so
// every draw consumes a fixed number of engine steps. That keeps prefix runs
// and re-runs bit-reproducible for a given seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal; two engine steps per draw
  double normal() {
    // u1 in (0, 1] so the log is finite
    double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return n <= 1 ? 0 : engine_() % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace accelev
