#pragma once

// Dense symmetric eigensolving by cyclic Jacobi rotations. Used for the
// small projected problems and as the oracle layer in the test suites.

#include <cstddef>
#include <vector>

#include "inflate/eigenpairs.hpp"

namespace infl {

class DenseSymMatrix {
 public:
  explicit DenseSymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// All eigenpairs, values ascending, vectors unit and orthonormal.
// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 |M|.
EigenpairSet jacobi_dense_eigen(const DenseSymMatrix& M);

}  // namespace infl
