#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "radcool/constants.hpp"

namespace radcool {

// splitmix64 step; used to derive independent child seeds from a master
// seed so parallel streams are reproducible.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
  return a ^ splitmix64(s);
}

// Gaussian sampler on top of mt19937_64. The engine's output sequence is
// fixed by the standard and Box-Muller is done by hand, so streams are
// bit-reproducible across platforms (std::normal_distribution is not).
// The state is seeded through seed_seq from splitmix64 words; single-word
// init leaves measurable structure between nearby streams.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  // Uniform in (0, 1].
  double uniform() {
    const std::uint64_t u = engine_() >> 11;  // 53 bits
    return (static_cast<double>(u) + 1.0) * 0x1p-53;
  }

  double standard_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = constants::two_pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * standard_normal();
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = standard_normal();
    const double im = standard_normal();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace radcool
