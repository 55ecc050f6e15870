#include "inflate/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "inflate/rng.hpp"
#include "inflate/vec.hpp"

namespace infl {

void orthonormalize_with_companions(std::vector<std::vector<double>>& vectors,
                                    std::vector<std::vector<double>>& companions,
                                    double drop_tol,
                                    std::vector<std::size_t>* kept_out) {
  if (vectors.empty()) throw std::invalid_argument("orthonormalize: empty input");
  const bool with_comp = !companions.empty();
  if (with_comp && companions.size() != vectors.size())
    throw std::invalid_argument("orthonormalize: companion count mismatch");

  std::vector<std::vector<double>> q, qc;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    std::vector<double> v = vectors[j];
    std::vector<double> c = with_comp ? companions[j] : std::vector<double>{};
    double orig = norm2(v);
    if (orig == 0.0 || !all_finite(v)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < q.size(); ++i) {
        double r = dot(q[i], v);
        axpy(-r, q[i], v);
        if (with_comp) axpy(-r, qc[i], c);
      }
    }
    double nn = norm2(v);
    if (nn < drop_tol * orig) continue;
    scale(1.0 / nn, v);
    if (with_comp) scale(1.0 / nn, c);
    q.push_back(std::move(v));
    if (with_comp) qc.push_back(std::move(c));
    kept.push_back(j);
  }
  vectors = std::move(q);
  if (with_comp) companions = std::move(qc);
  if (kept_out) *kept_out = std::move(kept);
}

std::vector<std::vector<double>> orthonormalize(
    const std::vector<std::vector<double>>& vectors, double drop_tol) {
  auto copy = vectors;
  std::vector<std::vector<double>> none;
  orthonormalize_with_companions(copy, none, drop_tol);
  return copy;
}

RitzProblem build_ritz_problem(const SparseSymMatrix& A,
                               const std::vector<std::vector<double>>& vectors,
                               MatvecCounter& mc) {
  const std::size_t k = vectors.size();
  RitzProblem rp{DenseSymMatrix(k), DenseSymMatrix(k)};
  std::vector<std::vector<double>> av;
  av.reserve(k);
  for (const auto& v : vectors) av.push_back(matvec(A, v, mc));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      rp.H.at(i, j) = dot(vectors[i], av[j]);
      rp.S.at(i, j) = dot(vectors[i], vectors[j]);
    }
  return rp;
}

EigenpairSet rayleigh_ritz(const SparseSymMatrix& A,
                           const std::vector<std::vector<double>>& vectors,
                           MatvecCounter& mc,
                           const std::vector<std::vector<double>>* products) {
  if (vectors.empty()) throw std::invalid_argument("rayleigh_ritz: empty basis");
  auto basis = vectors;
  std::vector<std::vector<double>> aprod;
  if (products) {
    if (products->size() != vectors.size())
      throw std::invalid_argument("rayleigh_ritz: product count mismatch");
    aprod = *products;
    orthonormalize_with_companions(basis, aprod, 1e-10);
  } else {
    std::vector<std::vector<double>> none;
    orthonormalize_with_companions(basis, none, 1e-10);
  }
  if (basis.empty()) throw std::invalid_argument("rayleigh_ritz: span is empty");
  const std::size_t k = basis.size();
  const std::size_t n = A.dim();
  if (aprod.empty()) {
    aprod.reserve(k);
    for (const auto& q : basis) aprod.push_back(matvec(A, q, mc));
  }
  DenseSymMatrix H(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double h = 0.5 * (dot(basis[i], aprod[j]) + dot(basis[j], aprod[i]));
      H.at(i, j) = h;
      H.at(j, i) = h;
    }
  EigenpairSet small = jacobi_dense_eigen(H);

  EigenpairSet out;
  for (std::size_t e = 0; e < k; ++e) {
    std::vector<double> z(n, 0.0), az(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      axpy(small.vectors[e][j], basis[j], z);
      axpy(small.vectors[e][j], aprod[j], az);
    }
    double zz = dot(z, z);
    double val = small.values[e];
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = az[i] - val * z[i];
      mu += r * r;
    }
    mu /= zz;
    scale(1.0 / std::sqrt(zz), z);
    fix_sign(z);
    out.values.push_back(val);
    out.vectors.push_back(std::move(z));
    out.residuals.push_back(mu);
    out.converged.push_back(true);
  }
  return out;
}

SolveResult windowed_solve(const SparseSymMatrix& A, const InflationConfig& cfg,
                           std::size_t k, std::span<const double> x0) {
  if (k < 1) throw std::invalid_argument("windowed_solve: k must be >= 1");
  InflationConfig base = cfg;
  base.schedule = ScheduleMode::window;
  ResolvedConfig rc = resolve_config(A, base);

  std::vector<double> start =
      x0.empty() ? Rng(cfg.seed).unit_vector(A.dim()) : normalized(x0);
  InflationDriver driver(A, StateVector{start, std::vector<double>(A.dim(), 0.0)},
                         rc.dt, rc.offset, cfg.integrator, cfg.normalize_every,
                         cfg.adapt);
  MatvecCounter mc;
  SolveResult out;

  // Stage 1: inflate away everything above the window. Runs well past the
  // plain tolerance: resolving a splitting of size delta needs the modes
  // above the window crushed below delta, so we stop only at a deep floor
  // or after mu plateaus (the window-internal residual dominates) plus the
  // same number of steps again.
  double prev_mu = std::numeric_limits<double>::infinity();
  int flat = 0;
  std::size_t stop_at = cfg.max_steps;
  std::size_t i = 0;
  for (; i < cfg.max_steps && i < stop_at; ++i) {
    TraceRecord rec = driver.step(mc);
    out.trace.push_back(rec);
    if (rec.mu <= 1e-12 * rc.tol_mu) break;
    if (stop_at == cfg.max_steps) {
      double rel = std::abs(rec.mu - prev_mu) / std::max(rec.mu, 1e-300);
      flat = rel < 0.05 ? flat + 1 : 0;
      if (flat >= 25) stop_at = std::min(cfg.max_steps, 2 * (i + 1));
    }
    prev_mu = rec.mu;
  }

  // Stage 2: Krylov basis {phi, A phi, ...}, Rayleigh-Ritz, grow until the
  // lowest residual stops improving.
  std::vector<double> phi = normalized(driver.state().x);
  std::vector<std::vector<double>> phis{phi};
  std::vector<std::vector<double>> aphis{matvec(A, phi, mc)};
  const std::size_t cap = std::max<std::size_t>(k, 32);

  EigenpairSet best;
  double best_r0 = std::numeric_limits<double>::infinity();
  for (std::size_t kb = std::max<std::size_t>(k, 1); kb <= cap; ++kb) {
    while (phis.size() < kb) {
      std::vector<double> next = normalized(aphis.back());
      aphis.push_back(matvec(A, next, mc));
      phis.push_back(std::move(next));
    }
    EigenpairSet ep;
    try {
      ep = rayleigh_ritz(A, phis, mc, &aphis);
    } catch (const std::invalid_argument&) {
      break;  // span degenerated
    }
    if (ep.size() < k) continue;
    double r0 = ep.residuals[0];
    if (r0 < best_r0) {
      best_r0 = r0;
      best = std::move(ep);
      if (r0 <= rc.tol_mu) break;
    } else if (best.size() >= k) {
      break;  // no further improvement
    }
  }
  if (best.size() < k)
    throw std::runtime_error("windowed_solve: subspace never reached k pairs");

  out.pairs.values.assign(best.values.begin(), best.values.begin() + k);
  out.pairs.vectors.assign(best.vectors.begin(), best.vectors.begin() + k);
  out.pairs.residuals.assign(best.residuals.begin(), best.residuals.begin() + k);
  out.pairs.converged.clear();
  for (std::size_t j = 0; j < k; ++j)
    out.pairs.converged.push_back(out.pairs.residuals[j] <= rc.tol_mu);
  out.converged = out.pairs.all_converged();
  out.matvecs = mc.count;
  return out;
}

SolveResult multi_inflation(const SparseSymMatrix& A, std::size_t k,
                            const InflationConfig& cfg,
                            const std::vector<std::vector<double>>& x0s) {
  const std::size_t n = A.dim();
  if (k < 1 || k > n) throw std::invalid_argument("multi_inflation: bad k");
  if (x0s.size() > k) throw std::invalid_argument("multi_inflation: too many starts");
  for (const auto& v : x0s)
    if (v.size() != n) throw std::invalid_argument("multi_inflation: start dim mismatch");
  ResolvedConfig rc = resolve_config(A, cfg);
  Rng rng(cfg.seed);

  std::vector<std::vector<double>> xs, ps;
  for (const auto& v : x0s) xs.push_back(normalized(v));
  while (xs.size() < k) xs.push_back(rng.unit_vector(n));
  {
    std::vector<std::vector<double>> none;
    orthonormalize_with_companions(xs, none, 1e-10);
    while (xs.size() < k) xs.push_back(rng.unit_vector(n));  // unlucky start
    std::vector<std::vector<double>> none2;
    orthonormalize_with_companions(xs, none2, 1e-10);
    if (xs.size() < k) throw std::runtime_error("multi_inflation: cannot seed basis");
  }
  ps.assign(k, std::vector<double>(n, 0.0));

  MatvecCounter mc;
  SolveResult out;
  std::vector<double> lambdas(k, 0.0), mus(k, 0.0);
  double dt = rc.dt;
  int halvings = 0, rising = 0, reseeds = 0, since_min = 0;
  double prev_worst = std::numeric_limits<double>::infinity();
  double min_worst = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (std::size_t step = 0; step < cfg.max_steps && !converged; ++step) {
    auto saved_x = xs;
    auto saved_p = ps;
    bool finite = true;
    for (std::size_t a = 0; a < k; ++a) {
      auto y = matvec(A, xs[a], mc);
      double xx = dot(xs[a], xs[a]);
      lambdas[a] = dot(xs[a], y) / xx;
      double mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - lambdas[a] * xs[a][i];
        mu += r * r;
      }
      mus[a] = mu / xx;
      double lt = lambdas[a] + rc.offset;
      for (std::size_t i = 0; i < n; ++i) ps[a][i] += (lt * xs[a][i] - y[i]) * dt;
      for (std::size_t i = 0; i < n; ++i) xs[a][i] += ps[a][i] * dt;
      if (!all_finite(xs[a]) || !all_finite(ps[a])) finite = false;
    }

    double worst = *std::max_element(mus.begin(), mus.end());
    std::size_t low = static_cast<std::size_t>(
        std::min_element(lambdas.begin(), lambdas.end()) - lambdas.begin());
    out.trace.push_back({step, mc.count, lambdas[low], worst, dt,
                         lambdas[low] + rc.offset});
    if (worst <= rc.tol_mu) {
      xs = std::move(saved_x);  // pairs are the pre-update vectors
      converged = true;
      break;
    }

    if (!finite) {
      if (!cfg.adapt || halvings >= 10)
        throw std::overflow_error("multi_inflation: state overflowed; reduce dt");
      xs = std::move(saved_x);
      ps = std::move(saved_p);
      dt *= 0.5;
      ++halvings;
      rising = 0;
      continue;
    }
    rising = worst > prev_worst ? rising + 1 : 0;
    prev_worst = worst;
    if (worst < min_worst) {
      min_worst = worst;
      since_min = 0;
    } else {
      ++since_min;
    }
    // Same two instability signatures as the single-vector driver: a fast
    // rise far above the best mu, or a long stall pinned above it.
    bool violent = rising >= 5 && worst > 10.0 * min_worst;
    bool stalled = since_min >= 100 && worst > 4.0 * min_worst;
    if (cfg.adapt && (violent || stalled) && halvings < 10) {
      dt *= 0.5;
      ++halvings;
      rising = 0;
      min_worst = worst;
      since_min = 0;
    }

    // Constraint step: order by Rayleigh quotient, then Gram-Schmidt with
    // the same elimination applied to the momenta.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
    std::vector<std::vector<double>> ox, op;
    for (std::size_t a : order) {
      ox.push_back(std::move(xs[a]));
      op.push_back(std::move(ps[a]));
    }
    orthonormalize_with_companions(ox, op, 1e-10);
    while (ox.size() < k) {
      if (++reseeds > 20)
        throw std::runtime_error("multi_inflation: repeated rank collapse");
      ox.push_back(rng.unit_vector(n));
      op.push_back(std::vector<double>(n, 0.0));
      orthonormalize_with_companions(ox, op, 1e-10);
    }
    xs = std::move(ox);
    ps = std::move(op);
  }

  // Final extraction from the converged set.
  std::vector<std::vector<double>> none;
  orthonormalize_with_companions(xs, none, 1e-10);
  std::vector<std::size_t> order(xs.size());
  for (std::size_t a = 0; a < xs.size(); ++a) {
    auto y = matvec(A, xs[a], mc);
    lambdas[a] = dot(xs[a], y);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - lambdas[a] * xs[a][i];
      mu += r * r;
    }
    mus[a] = mu;
  }
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
  for (std::size_t a : order) {
    fix_sign(xs[a]);
    out.pairs.values.push_back(lambdas[a]);
    out.pairs.vectors.push_back(xs[a]);
    out.pairs.residuals.push_back(mus[a]);
    out.pairs.converged.push_back(mus[a] <= rc.tol_mu);
  }
  out.converged = converged && out.pairs.all_converged();
  out.matvecs = mc.count;
  return out;
}

SolveResult periodic_subspace_solve(const SparseSymMatrix& A, const InflationConfig& cfg,
                                    std::size_t basis_size, std::size_t period,
                                    std::size_t want) {
  if (want < 1 || basis_size < want)
    throw std::invalid_argument("periodic_subspace_solve: need basis_size >= want >= 1");
  if (period < 1) throw std::invalid_argument("periodic_subspace_solve: period >= 1");
  ResolvedConfig rc = resolve_config(A, cfg);

  InflationDriver driver(
      A, StateVector{Rng(cfg.seed).unit_vector(A.dim()),
                     std::vector<double>(A.dim(), 0.0)},
      rc.dt, rc.offset, cfg.integrator, cfg.normalize_every, cfg.adapt);
  MatvecCounter mc;
  SolveResult out;

  // Converged Ritz pairs are locked: kept in every later basis and
  // projected out of the dynamical state, so the single evolving vector
  // descends to the lowest *unconverged* level. Without that, each restart
  // discards the excited-state content of the iterate window and the
  // higher pairs never refine past the one-shot subspace accuracy.
  std::vector<std::vector<double>> recent, locked;
  EigenpairSet latest;
  double best_score = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    TraceRecord rec = driver.step(mc);
    out.trace.push_back(rec);
    for (const auto& v : locked) {
      axpy(-dot(v, driver.state().x), v, driver.state().x);
      axpy(-dot(v, driver.state().p), v, driver.state().p);
    }
    recent.push_back(normalized(driver.state().x));
    if (recent.size() > basis_size) recent.erase(recent.begin());

    if ((step + 1) % period != 0) continue;

    std::vector<std::vector<double>> basis = locked;
    basis.insert(basis.end(), recent.begin(), recent.end());
    EigenpairSet ep;
    try {
      ep = rayleigh_ritz(A, basis, mc);
    } catch (const std::invalid_argument&) {
      continue;
    }
    for (std::size_t e = 0; e < ep.size(); ++e)
      out.trace.push_back({step, mc.count, ep.values[e], ep.residuals[e], driver.dt(),
                           rec.lambda_tilde});

    std::size_t nconv = 0;
    while (nconv < ep.size() && nconv < want && ep.residuals[nconv] <= rc.tol_mu)
      ++nconv;
    if (ep.size() >= want) {
      latest = ep;
      double score = 0.0;
      for (std::size_t e = 0; e < want; ++e) score += ep.residuals[e];
      if (score < best_score * 0.99) {
        best_score = score;
        stalled = 0;
      } else {
        ++stalled;
      }
      if (nconv >= want || stalled >= 50) {
        out.converged = nconv >= want;
        break;
      }
    }
    if (basis_size > 1) {
      locked.assign(ep.vectors.begin(), ep.vectors.begin() + nconv);
      std::size_t next = std::min(nconv, ep.size() - 1);
      driver.restart(ep.vectors[next]);
      for (const auto& v : locked) {
        axpy(-dot(v, driver.state().x), v, driver.state().x);
        axpy(-dot(v, driver.state().p), v, driver.state().p);
      }
      recent.clear();
      recent.push_back(normalized(driver.state().x));
    }
  }

  if (latest.size() < want)
    throw std::runtime_error("periodic_subspace_solve: subspace never reached want pairs");
  out.pairs.values.assign(latest.values.begin(), latest.values.begin() + want);
  out.pairs.vectors.assign(latest.vectors.begin(), latest.vectors.begin() + want);
  out.pairs.residuals.assign(latest.residuals.begin(), latest.residuals.begin() + want);
  for (std::size_t e = 0; e < want; ++e)
    out.pairs.converged.push_back(out.pairs.residuals[e] <= rc.tol_mu);
  out.converged = out.pairs.all_converged();
  out.matvecs = mc.count;
  return out;
}

}  // namespace infl
