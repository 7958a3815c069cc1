#pragma once
// Reproducible random substreams: an independent generator is derived from
// (master_seed, point_index, block_index), so parallel sampling produces
// identical results for any worker count as long as block boundaries and the
// merge order are fixed.
#include <cstdint>
#include <random>

namespace cvatm {

namespace detail {
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

class RngStream {
 public:
  RngStream(uint64_t master_seed, uint64_t point_index, uint64_t block_index) {
    uint64_t s = master_seed;
    (void)detail::splitmix64(s);
    s ^= 0xD1B54A32D192ED03ull * (point_index + 1);
    (void)detail::splitmix64(s);
    s ^= 0x8CB92BA72F3D8DD7ull * (block_index + 1);
    engine_.seed(detail::splitmix64(s));
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 1.0 - uniform();  // (0,1]: keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 uses the
  // Gamma(shape+1) boost with a uniform power.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = 1.0 - uniform();  // (0,1]
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = 1.0 - uniform();  // (0,1]
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace cvatm
