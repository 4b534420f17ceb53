#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace qgd {

/// Deterministic pseudorandom stream (splitmix64). Used everywhere a seeded
/// draw is needed so regression values are identical across platforms; the
/// standard library distributions are avoided because their outputs are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  uint64_t below(uint64_t n) {
    uint64_t bound = n * ((~uint64_t{0}) / n);
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= bound);
    return v % n;
  }

  bool next_bit() { return next_u64() >> 63; }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Standard normal via Box-Muller (one value per call, deterministic).
  double gaussian() {
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Uniform direction on the unit sphere in dimension d.
  std::vector<double> unit_vector(int d) {
    std::vector<double> v(static_cast<size_t>(d));
    double n2 = 0;
    do {
      n2 = 0;
      for (auto& x : v) {
        x = gaussian();
        n2 += x * x;
      }
    } while (n2 == 0.0);
    double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
  }

  /// Independent substream for endpoint/run `tag`.
  static Rng fork(uint64_t seed, uint64_t tag) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    return Rng(mix.next_u64());
  }

 private:
  uint64_t state_;
};

}  // namespace qgd
