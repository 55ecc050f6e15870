#pragma once

// Rayleigh-Ritz machinery: orthonormalization, projection onto small
// subspaces, the windowed solve for near-degenerate spectra, the
// orthogonality-constrained multi-vector inflation and the periodic
// subspace-diagonalization driver.

#include <cstddef>
#include <span>
#include <vector>

#include "inflate/dense.hpp"
#include "inflate/dynamics.hpp"
#include "inflate/eigenpairs.hpp"
#include "inflate/sparse.hpp"

namespace infl {

// Projected operator H and overlap S of a raw (not yet orthonormal) basis.
struct RitzProblem {
  DenseSymMatrix H;
  DenseSymMatrix S;
};

// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
// post-projection norm falls below drop_tol times their original norm are
// dropped. Throws if the input is empty; an all-dropped result is an
// empty list.
std::vector<std::vector<double>> orthonormalize(
    const std::vector<std::vector<double>>& vectors, double drop_tol = 1e-10);

// Same, but applies the identical elimination coefficients to a parallel
// list of companion vectors (e.g. stored A*phi products, or momenta).
void orthonormalize_with_companions(std::vector<std::vector<double>>& vectors,
                                    std::vector<std::vector<double>>& companions,
                                    double drop_tol,
                                    std::vector<std::size_t>* kept = nullptr);

RitzProblem build_ritz_problem(const SparseSymMatrix& A,
                               const std::vector<std::vector<double>>& vectors,
                               MatvecCounter& mc);

// Orthonormalize the span (dropping dependents), project, diagonalize with
// cyclic Jacobi and map Ritz vectors back as unit vectors with residuals.
// Costs one matvec per retained basis vector unless products (A*vectors,
// aligned with vectors) are supplied.
EigenpairSet rayleigh_ritz(const SparseSymMatrix& A,
                           const std::vector<std::vector<double>>& vectors,
                           MatvecCounter& mc,
                           const std::vector<std::vector<double>>* products = nullptr);

// Window-schedule inflation followed by a Krylov-basis Rayleigh-Ritz
// extraction of the k lowest pairs; the basis grows until the lowest
// residual stops improving (cap 32 basis vectors).
SolveResult windowed_solve(const SparseSymMatrix& A, const InflationConfig& cfg,
                           std::size_t k, std::span<const double> x0 = {});

// k simultaneously evolved vectors, re-orthonormalized every step (the
// Gram-Schmidt realization of the pairwise orthogonality constraint).
// x0s may supply up to k start vectors; missing slots are seeded randomly.
SolveResult multi_inflation(const SparseSymMatrix& A, std::size_t k,
                            const InflationConfig& cfg,
                            const std::vector<std::vector<double>>& x0s = {});

// Single-vector dynamics with a basis_size-dimensional diagonalization
// every `period` steps; restarts from the lowest Ritz vector. Returns the
// `want` lowest pairs. The trace logs every Ritz value per diagonalization.
SolveResult periodic_subspace_solve(const SparseSymMatrix& A, const InflationConfig& cfg,
                                    std::size_t basis_size, std::size_t period,
                                    std::size_t want);

}  // namespace infl
