#pragma once

// Small dense vector kernels shared by all solvers.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace infl {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> v) {
  for (double& e : v) e *= alpha;
}

inline bool all_finite(std::span<const double> v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

// v / |v|; rejects zero and non-finite input.
inline std::vector<double> normalized(std::span<const double> v) {
  if (!all_finite(v)) throw std::invalid_argument("normalize: non-finite vector");
  double n = norm2(v);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  std::vector<double> out(v.begin(), v.end());
  scale(1.0 / n, out);
  return out;
}

// Deterministic sign convention: largest-magnitude component positive.
inline void fix_sign(std::span<double> v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v.size() > 0 && v[imax] < 0.0) scale(-1.0, v);
}

}  // namespace infl
