#include "inflate/variants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "inflate/dense.hpp"
#include "inflate/rng.hpp"
#include "inflate/subspace.hpp"
#include "inflate/vec.hpp"

namespace infl {

static std::vector<double> start_vec(const SparseSymMatrix& A, std::span<const double> x0,
                                     std::uint64_t seed) {
  if (x0.empty()) return Rng(seed).unit_vector(A.dim());
  if (x0.size() != A.dim()) throw std::invalid_argument("start vector dimension mismatch");
  return normalized(x0);
}

static SolveResult single_pair_result(std::vector<double> x, double lambda, double mu,
                                      bool converged, Trace trace, std::size_t matvecs) {
  SolveResult out;
  fix_sign(x);
  out.pairs.values = {lambda};
  out.pairs.vectors = {std::move(x)};
  out.pairs.residuals = {mu};
  out.pairs.converged = {converged};
  out.converged = converged;
  out.trace = std::move(trace);
  out.matvecs = matvecs;
  return out;
}

SolveResult first_order_descent(const SparseSymMatrix& A, std::span<const double> x0,
                                const FirstOrderConfig& cfg) {
  SpectralBounds b = gershgorin_bounds(A);
  double range = b.hi - b.lo;
  double dbeta = cfg.dbeta > 0.0 ? cfg.dbeta : (range > 0.0 ? 1.0 / range : 1.0);
  double tol = cfg.tol_mu > 0.0 ? cfg.tol_mu : 1e-10 * range * range;
  const std::size_t n = A.dim();

  std::vector<double> x = start_vec(A, x0, cfg.seed);
  MatvecCounter mc;
  Trace trace;
  double lambda = 0.0, mu = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    auto y = matvec(A, x, mc);
    lambda = dot(x, y);
    mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - lambda * x[i];
      mu += r * r;
    }
    trace.push_back({step, mc.count, lambda, mu, dbeta, lambda});
    if (mu <= tol) {
      converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] -= dbeta * (y[i] - lambda * x[i]);
    if (!all_finite(x))
      throw std::overflow_error("first_order_descent: diverged; reduce dbeta");
    double nx = norm2(x);
    scale(1.0 / nx, x);
  }
  return single_pair_result(std::move(x), lambda, mu, converged, std::move(trace),
                            mc.count);
}

SolveResult power_method(const SparseSymMatrix& A, PowerMode mode,
                         std::span<const double> x0, std::size_t max_steps, double tol,
                         std::uint64_t seed) {
  SpectralBounds b = gershgorin_bounds(A);
  const std::size_t n = A.dim();
  std::vector<double> v = start_vec(A, x0, seed);
  MatvecCounter mc;
  Trace trace;
  double lambda = 0.0, mu = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> prev;
  bool oscillating = false;
  for (std::size_t step = 0; step < max_steps; ++step) {
    auto y = matvec(A, v, mc);  // one matvec serves both B v and the A diagnostics
    lambda = dot(v, y);
    mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - lambda * v[i];
      mu += r * r;
    }
    trace.push_back({step, mc.count, lambda, mu, 1.0, lambda});
    if (mu <= tol) {
      converged = true;
      break;
    }
    std::vector<double> next(n);
    if (mode == PowerMode::largest)
      next = y;
    else
      for (std::size_t i = 0; i < n; ++i) next[i] = b.hi * v[i] - y[i];
    double nn = norm2(next);
    if (nn == 0.0) break;  // v in the kernel of the iteration operator
    scale(1.0 / nn, next);
    if (!prev.empty()) {
      double c = dot(next, prev);
      if (c < -0.999 && mu > tol) {
        oscillating = true;  // +/- flip between equal-magnitude eigenvalues
        v = std::move(next);
        break;
      }
    }
    prev = v;
    v = std::move(next);
  }
  (void)oscillating;
  return single_pair_result(std::move(v), lambda, mu, converged, std::move(trace),
                            mc.count);
}

SolveResult lanczos_basic(const SparseSymMatrix& A, std::span<const double> x0,
                          std::size_t m, bool two_pass_accounting, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("lanczos: m must be >= 1");
  const std::size_t n = A.dim();
  m = std::min(m, n);
  std::vector<double> q = start_vec(A, x0, seed);
  std::vector<std::vector<double>> basis{q};
  std::vector<double> alpha, beta;  // tridiagonal entries
  MatvecCounter mc;
  Trace trace;
  bool breakdown = false;
  double last_bn = 0.0;

  for (std::size_t j = 0; j < m; ++j) {
    auto w = matvec(A, basis[j], mc);
    double a = dot(basis[j], w);
    alpha.push_back(a);
    axpy(-a, basis[j], w);
    if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
    // Full reorthogonalization, twice through the stored basis.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qi : basis) axpy(-dot(qi, w), qi, w);

    // Lowest Ritz value so far for the trace.
    DenseSymMatrix T(j + 1);
    for (std::size_t i = 0; i <= j; ++i) {
      T.at(i, i) = alpha[i];
      if (i > 0) {
        T.at(i, i - 1) = beta[i - 1];
        T.at(i - 1, i) = beta[i - 1];
      }
    }
    EigenpairSet small = jacobi_dense_eigen(T);
    std::size_t charged = mc.count + (two_pass_accounting ? mc.count : 0);
    double bn = norm2(w);
    last_bn = bn;
    double mu_est = small.vectors[0].back() * bn;
    mu_est *= mu_est;
    trace.push_back({j, charged, small.values[0], mu_est, 1.0, small.values[0]});

    if (j + 1 == m) break;
    if (bn < 1e-14) {
      breakdown = true;  // exact invariant subspace reached
      break;
    }
    beta.push_back(bn);
    scale(1.0 / bn, w);
    basis.push_back(std::move(w));
  }

  const std::size_t k = alpha.size();
  DenseSymMatrix T(k);
  for (std::size_t i = 0; i < k; ++i) {
    T.at(i, i) = alpha[i];
    if (i > 0) {
      T.at(i, i - 1) = beta[i - 1];
      T.at(i - 1, i) = beta[i - 1];
    }
  }
  EigenpairSet small = jacobi_dense_eigen(T);

  SolveResult out;
  double tail = breakdown ? 0.0 : last_bn;
  for (std::size_t e = 0; e < k; ++e) {
    std::vector<double> z(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) axpy(small.vectors[e][j], basis[j], z);
    double nz = norm2(z);
    scale(1.0 / nz, z);
    fix_sign(z);
    double r = tail * small.vectors[e].back();
    out.pairs.values.push_back(small.values[e]);
    out.pairs.vectors.push_back(std::move(z));
    out.pairs.residuals.push_back(r * r);
    out.pairs.converged.push_back(true);
  }
  out.converged = true;
  out.matvecs = mc.count + (two_pass_accounting ? mc.count : 0);
  out.trace = std::move(trace);
  return out;
}

std::vector<double> quartic_gradient(const SparseSymMatrix& A, std::span<const double> x,
                                     double kappa, MatvecCounter& mc) {
  auto y = matvec(A, x, mc);
  double excess = dot(x, x) - 1.0;
  std::vector<double> g(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    g[i] = 2.0 * y[i] + 4.0 * kappa * excess * x[i];
  return g;
}

SolveResult quartic_descent(const SparseSymMatrix& A, std::span<const double> x0,
                            const QuarticConfig& cfg) {
  SpectralBounds b = gershgorin_bounds(A);
  double range = b.hi - b.lo;
  double kappa = cfg.kappa > 0.0 ? cfg.kappa : b.hi;
  if (!(kappa > b.hi / 2.0))
    throw std::invalid_argument("quartic_descent: kappa must exceed hi/2");
  double damping = cfg.damping >= 0.0 ? cfg.damping : std::sqrt(std::max(range, 1e-12)) / 10.0;
  // Curvature near the minimum: Hessian 2A + 4 kappa (|x|^2 - 1) I
  // + 8 kappa x x^T, bounded by 8 kappa + 2 range plus low-end terms when
  // the spectrum dips negative. Extra headroom for the nonlinear transient.
  double stiff = 8.0 * kappa + 2.0 * range + 4.0 * std::max(0.0, -b.lo);
  double dt = cfg.dt > 0.0 ? cfg.dt : choose_timestep({0.0, stiff}, 0.6);
  const std::size_t n = A.dim();

  Rng rng(cfg.seed);
  std::vector<double> x = x0.empty() ? rng.unit_vector(n) : std::vector<double>(x0.begin(), x0.end());
  std::vector<double> p(n, 0.0);
  MatvecCounter mc;
  Trace trace;
  bool converged = false;
  int perturbations = 0;
  double lambda = 0.0, mu = std::numeric_limits<double>::infinity();

  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    auto y = matvec(A, x, mc);
    double xx = dot(x, x);
    if (xx < 1e-24) {
      // Stalled on the trivial extremum at the origin.
      if (++perturbations > 10)
        throw std::runtime_error("quartic_descent: persistent stall at the origin");
      auto kick = rng.unit_vector(n);
      for (std::size_t i = 0; i < n; ++i) x[i] += 1e-2 * kick[i];
      p.assign(n, 0.0);
      continue;
    }
    double excess = xx - 1.0;
    lambda = dot(x, y) / xx;
    mu = 0.0;
    double gnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double g = 2.0 * y[i] + 4.0 * kappa * excess * x[i];
      double r = y[i] - lambda * x[i];
      mu += r * r;
      gnorm2 += g * g;
      p[i] = (1.0 - damping * dt) * p[i] - g * dt;
    }
    mu /= xx;
    trace.push_back({step, mc.count, lambda, mu, dt, lambda});
    if (std::sqrt(gnorm2) <= cfg.tol_grad) {
      converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += p[i] * dt;
    if (!all_finite(x) || !all_finite(p))
      throw std::overflow_error("quartic_descent: diverged; reduce dt");
  }

  SolveResult out = single_pair_result(normalized(x), lambda, mu, converged,
                                       std::move(trace), mc.count);
  out.final_x_norm2 = dot(x, x);
  return out;
}

}  // namespace infl
