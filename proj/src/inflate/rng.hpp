#pragma once

// Deterministic random number generation. The engine is mt19937_64 (fully
// specified by the standard) and doubles are produced by explicit bit
// manipulation rather than std::uniform_real_distribution, so streams are
// identical across platforms and standard-library implementations.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace infl {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::uint64_t next_u64() { return gen_(); }

  // Standard normal via Box-Muller (deterministic, no cached spare).
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Uniform direction on the unit sphere in R^n.
  std::vector<double> unit_vector(std::size_t n) {
    std::vector<double> v(n);
    double s = 0.0;
    for (auto& e : v) {
      e = gaussian();
      s += e * e;
    }
    if (s == 0.0) {
      v[0] = 1.0;
      s = 1.0;
    }
    s = 1.0 / std::sqrt(s);
    for (auto& e : v) e *= s;
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace infl
