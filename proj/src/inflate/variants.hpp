#pragma once

// Baseline methods used for matvec-count comparisons (first-order descent,
// power iteration, basic Lanczos) and the quartic soft-constraint
// pseudopotential solver.

#include <cstddef>
#include <span>
#include <vector>

#include "inflate/dynamics.hpp"
#include "inflate/eigenpairs.hpp"
#include "inflate/sparse.hpp"

namespace infl {

struct FirstOrderConfig {
  double dbeta = 0.0;  // <= 0 selects 1/(hi - lo)
  std::size_t max_steps = 2000000;
  double tol_mu = 0.0;  // <= 0 selects 1e-10 * range^2
  std::uint64_t seed = 12345;
};

// Shifted explicit Euler on dx/dbeta = -(A - lambda) x with per-step
// normalization; one matvec per step.
SolveResult first_order_descent(const SparseSymMatrix& A, std::span<const double> x0,
                                const FirstOrderConfig& cfg);

enum class PowerMode { largest, smallest_shifted };

// Plain power iteration; smallest_shifted runs on hi*I - A (shift from the
// Gershgorin bound) and maps back to A's spectrum.
SolveResult power_method(const SparseSymMatrix& A, PowerMode mode,
                         std::span<const double> x0, std::size_t max_steps, double tol,
                         std::uint64_t seed = 12345);

// Three-term recurrence with full reorthogonalization against the stored
// basis; Ritz values from the tridiagonal by cyclic Jacobi. When
// two_pass_accounting is set, the matvec count charges a second pass of m
// products for eigenvector reconstruction without basis storage.
SolveResult lanczos_basic(const SparseSymMatrix& A, std::span<const double> x0,
                          std::size_t m, bool two_pass_accounting = false,
                          std::uint64_t seed = 12345);

struct QuarticConfig {
  double kappa = 0.0;    // <= 0 selects hi (always above the e0/2 validity bound)
  double dt = 0.0;       // <= 0 selects the stability step on bounds widened by 4 kappa
  double damping = -1.0; // < 0 selects sqrt(hi - lo)/10
  std::size_t max_steps = 2000000;
  double tol_grad = 1e-9;
  std::uint64_t seed = 12345;
};

// Gradient of V = x.Ax + kappa (|x|^2 - 1)^2; one matvec.
std::vector<double> quartic_gradient(const SparseSymMatrix& A, std::span<const double> x,
                                     double kappa, MatvecCounter& mc);

// Damped heavy-ball descent on the quartic pseudopotential; the global
// minimum is the ground eigenpair at |x|^2 = 1 - e0/(2 kappa).
SolveResult quartic_descent(const SparseSymMatrix& A, std::span<const double> x0,
                            const QuarticConfig& cfg);

}  // namespace infl
