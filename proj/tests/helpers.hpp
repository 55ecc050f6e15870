#pragma once

// Shared test utilities: small matrix builders and the dense row-by-row
// product oracle kept independent of the CSR kernel.

#include <cmath>
#include <vector>

#include "inflate/dense.hpp"
#include "inflate/rng.hpp"
#include "inflate/sparse.hpp"

namespace testutil {

inline infl::SparseSymMatrix from_dense(const std::vector<std::vector<double>>& rows) {
  std::vector<infl::Triplet> t;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (rows[i][j] != 0.0) t.push_back({i, j, rows[i][j]});
  return infl::SparseSymMatrix::from_triplets(rows.size(), std::move(t));
}

inline infl::SparseSymMatrix diag(const std::vector<double>& d) {
  std::vector<infl::Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return infl::SparseSymMatrix::from_triplets(d.size(), std::move(t));
}

inline infl::SparseSymMatrix identity(std::size_t n) {
  return diag(std::vector<double>(n, 1.0));
}

// diag 2, off-diagonal -1; spectrum 2 - 2 cos(k pi / (n+1)).
inline infl::SparseSymMatrix path_laplacian(std::size_t n) {
  std::vector<infl::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -1.0});
      t.push_back({i + 1, i, -1.0});
    }
  }
  return infl::SparseSymMatrix::from_triplets(n, std::move(t));
}

// Random sparse symmetric with diagonal, entries uniform in [-1, 1].
inline infl::SparseSymMatrix random_sparse(std::size_t n, double density,
                                           std::uint64_t seed) {
  infl::Rng rng(seed);
  std::vector<infl::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, rng.uniform(-1.0, 1.0)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform01() < density) {
        double v = rng.uniform(-1.0, 1.0);
        t.push_back({i, j, v});
        t.push_back({j, i, v});
      }
  return infl::SparseSymMatrix::from_triplets(n, std::move(t));
}

// Dense representation of a sparse matrix, via an independent row sweep
// over the dense image (not the CSR kernel).
inline std::vector<std::vector<double>> to_dense(const infl::SparseSymMatrix& A) {
  std::vector<std::vector<double>> d(A.dim(), std::vector<double>(A.dim(), 0.0));
  const auto& off = A.row_offsets();
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      d[i][A.col_indices()[k]] = A.values()[k];
  return d;
}

inline std::vector<double> dense_matvec(const std::vector<std::vector<double>>& d,
                                        const std::vector<double>& v) {
  std::vector<double> y(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) y[i] += d[i][j] * v[j];
  return y;
}

// Dense Jacobi oracle for a sparse matrix.
inline infl::EigenpairSet dense_oracle(const infl::SparseSymMatrix& A) {
  auto d = to_dense(A);
  infl::DenseSymMatrix M(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < A.dim(); ++j) M.at(i, j) = d[i][j];
  return infl::jacobi_dense_eigen(M);
}

}  // namespace testutil
