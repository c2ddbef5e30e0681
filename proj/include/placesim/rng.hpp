#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace placesim {

// Seeded RNG with hand-rolled transforms so that sampled values are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in (0, 1).
  double uniform() {
    // 53-bit mantissa; shifted into (0,1) to keep log() finite.
    const std::uint64_t bits = gen_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one value per call, no caching, so the
  // stream does not depend on call pairing.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double exponential(double mean) { return -mean * std::log(uniform()); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Modulo bias is negligible for the small bounds used here.
    return gen_() % bound;
  }

 private:
  std::mt19937_64 gen_;
};

// Mean-one multiplicative lognormal factor; sigma = 0 yields exactly 1.
inline double lognormal_factor(Rng& rng, double sigma) {
  if (sigma <= 0.0) return 1.0;
  return std::exp(sigma * rng.normal() - 0.5 * sigma * sigma);
}

}  // namespace placesim
