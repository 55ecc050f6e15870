#include "inflate/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace infl {

static double off_diag_norm(const DenseSymMatrix& M) {
  double s = 0.0;
  for (std::size_t i = 0; i < M.dim(); ++i)
    for (std::size_t j = i + 1; j < M.dim(); ++j) s += 2.0 * M.at(i, j) * M.at(i, j);
  return std::sqrt(s);
}

static double frobenius(const DenseSymMatrix& M) {
  double s = 0.0;
  for (std::size_t i = 0; i < M.dim(); ++i)
    for (std::size_t j = 0; j < M.dim(); ++j) s += M.at(i, j) * M.at(i, j);
  return std::sqrt(s);
}

EigenpairSet jacobi_dense_eigen(const DenseSymMatrix& M) {
  const std::size_t n = M.dim();
  double scale = frobenius(M);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(M.at(i, j) - M.at(j, i)) > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("jacobi: matrix not symmetric");

  DenseSymMatrix A = M;
  // Symmetrize exactly so rotations stay consistent.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (A.at(i, j) + A.at(j, i));
      A.at(i, j) = v;
      A.at(j, i) = v;
    }
  std::vector<double> V(n * n, 0.0);  // columns are eigenvectors
  for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

  const double tol = 1e-13 * std::max(scale, 1e-300);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_diag_norm(A) > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = A.at(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double app = A.at(p, p), aqq = A.at(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = V[k * n + p], vkq = V[k * n + q];
          V[k * n + p] = c * vkp - s * vkq;
          V[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return A.at(a, a) < A.at(b, b); });

  EigenpairSet out;
  out.values.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t j = order[idx];
    out.values.push_back(A.at(j, j));
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = V[k * n + j];
    // Sign convention: largest-magnitude component positive.
    std::size_t imax = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v[k]) > std::abs(v[imax])) imax = k;
    if (v[imax] < 0.0)
      for (auto& e : v) e = -e;
    out.vectors.push_back(std::move(v));
    out.residuals.push_back(0.0);
    out.converged.push_back(true);
  }
  return out;
}

}  // namespace infl
