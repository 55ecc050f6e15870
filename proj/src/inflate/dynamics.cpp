#include "inflate/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "inflate/rng.hpp"
#include "inflate/vec.hpp"

namespace infl {

double choose_timestep(const SpectralBounds& bounds, double safety) {
  if (safety <= 0.0) throw std::invalid_argument("choose_timestep: safety must be > 0");
  double range = bounds.hi - bounds.lo;
  if (range <= 0.0) return safety;  // spectrum is a point
  return safety * 2.0 / std::sqrt(range);
}

static void check_state(const SparseSymMatrix& A, const StateVector& s) {
  if (s.x.size() != A.dim() || s.p.size() != A.dim())
    throw std::invalid_argument("inflation_step: state dimension mismatch");
}

double inflation_step(const SparseSymMatrix& A, StateVector& s, double lambda_tilde,
                      double dt, Integrator integrator, MatvecCounter& mc) {
  check_state(A, s);
  if (dt <= 0.0) throw std::invalid_argument("inflation_step: dt must be > 0");
  const std::size_t n = A.dim();
  double lambda;
  if (integrator == Integrator::euler) {
    auto y = matvec(A, s.x, mc);
    double xx = dot(s.x, s.x);
    lambda = dot(s.x, y) / xx;
    for (std::size_t i = 0; i < n; ++i) s.p[i] += (lambda_tilde * s.x[i] - y[i]) * dt;
    for (std::size_t i = 0; i < n; ++i) s.x[i] += s.p[i] * dt;
  } else {
    std::vector<double> xh(n);
    for (std::size_t i = 0; i < n; ++i) xh[i] = s.x[i] + 0.5 * dt * s.p[i];
    auto y = matvec(A, xh, mc);
    double xx = dot(xh, xh);
    lambda = dot(xh, y) / xx;
    for (std::size_t i = 0; i < n; ++i) s.p[i] += (lambda_tilde * xh[i] - y[i]) * dt;
    for (std::size_t i = 0; i < n; ++i) s.x[i] = xh[i] + 0.5 * dt * s.p[i];
  }
  if (!all_finite(s.x) || !all_finite(s.p))
    throw std::overflow_error("inflation_step: state overflowed; reduce dt");
  return lambda;
}

InflationDriver::InflationDriver(const SparseSymMatrix& A, StateVector s, double dt,
                                 double offset, Integrator integrator,
                                 std::size_t normalize_every, bool adapt)
    : A_(A),
      state_(std::move(s)),
      dt_(dt),
      offset_(offset),
      integrator_(integrator),
      normalize_every_(normalize_every == 0 ? 1 : normalize_every),
      adapt_(adapt) {
  check_state(A_, state_);
  if (dt_ <= 0.0) throw std::invalid_argument("inflation: dt must be > 0");
}

void InflationDriver::restart(std::vector<double> x) {
  state_.x = std::move(x);
  state_.p.assign(state_.x.size(), 0.0);
  rising_ = 0;
  mu_ = std::numeric_limits<double>::infinity();
  min_mu_ = std::numeric_limits<double>::infinity();
  since_min_ = 0;
}

TraceRecord InflationDriver::step(MatvecCounter& mc) {
  const std::size_t n = A_.dim();
  constexpr int kMaxHalvings = 10;
  constexpr int kRisingLimit = 5;

  if (step_ % normalize_every_ == 0) {
    double nx = norm2(state_.x);
    if (std::isfinite(nx) && nx > 0.0) {
      scale(1.0 / nx, state_.x);
      scale(1.0 / nx, state_.p);  // same factor keeps the trajectory direction
    }
  }

  double prev_mu = mu_;
  double lambda = 0.0, mu = 0.0, lt = 0.0, dt_used = dt_;
  StateVector saved = adapt_ ? state_ : StateVector{};

  while (true) {
    dt_used = dt_;
    if (integrator_ == Integrator::euler) {
      auto y = matvec(A_, state_.x, mc);
      double xx = dot(state_.x, state_.x);
      lambda = dot(state_.x, y) / xx;
      mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - lambda * state_.x[i];
        mu += r * r;
      }
      mu /= xx;
      lt = lambda + offset_;
      eval_x_ = state_.x;
      for (std::size_t i = 0; i < n; ++i)
        state_.p[i] += (lt * state_.x[i] - y[i]) * dt_;
      for (std::size_t i = 0; i < n; ++i) state_.x[i] += state_.p[i] * dt_;
    } else {
      std::vector<double> xh(n);
      for (std::size_t i = 0; i < n; ++i) xh[i] = state_.x[i] + 0.5 * dt_ * state_.p[i];
      auto y = matvec(A_, xh, mc);
      double xx = dot(xh, xh);
      lambda = dot(xh, y) / xx;
      mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - lambda * xh[i];
        mu += r * r;
      }
      mu /= xx;
      lt = lambda + offset_;
      for (std::size_t i = 0; i < n; ++i) state_.p[i] += (lt * xh[i] - y[i]) * dt_;
      for (std::size_t i = 0; i < n; ++i) state_.x[i] = xh[i] + 0.5 * dt_ * state_.p[i];
      eval_x_ = std::move(xh);
    }
    if (std::isfinite(mu) && all_finite(state_.x) && all_finite(state_.p)) break;
    // Overflowed: rewind and retry at half the step if allowed.
    if (!adapt_ || halvings_ >= kMaxHalvings)
      throw std::overflow_error("inflation: state overflowed; reduce dt");
    state_ = saved;
    double nx = norm2(state_.x);
    if (std::isfinite(nx) && nx > 0.0) {
      scale(1.0 / nx, state_.x);
      scale(1.0 / nx, state_.p);
    }
    dt_ *= 0.5;
    ++halvings_;
    rising_ = 0;
  }

  if (mu > prev_mu)
    ++rising_;
  else
    rising_ = 0;
  if (mu < min_mu_) {
    min_mu_ = mu;
    since_min_ = 0;
  } else {
    ++since_min_;
  }
  // Two instability signatures. Violent: mu rises for several steps in a
  // row and climbs well above its best value (benign oscillations do one
  // or the other, not both). Marginal: per-step normalization clamps a
  // slightly-too-large dt into a saturated state, so mu rises from an
  // early dip and then pins at a plateau -- no new minimum for a long
  // stretch while sitting far above it. Stable plateaus approach their
  // level from above and keep setting minima, so they never trip this.
  constexpr int kStallLimit = 100;
  bool violent = rising_ >= kRisingLimit && mu > 10.0 * min_mu_;
  bool stalled = since_min_ >= kStallLimit && mu > 4.0 * min_mu_;
  if (adapt_ && (violent || stalled) && halvings_ < kMaxHalvings) {
    dt_ *= 0.5;
    ++halvings_;
    rising_ = 0;
    min_mu_ = mu;
    since_min_ = 0;
  }

  lambda_ = lambda;
  mu_ = mu;
  TraceRecord rec{step_, mc.count, lambda, mu, dt_used, lt};
  ++step_;
  return rec;
}

ResolvedConfig resolve_config(const SparseSymMatrix& A, const InflationConfig& cfg) {
  if (cfg.safety <= 0.0 || cfg.safety > 1.0)
    throw std::invalid_argument("config: safety must be in (0, 1]");
  if (cfg.gap < 0.0) throw std::invalid_argument("config: gap must be >= 0");
  if (cfg.max_steps == 0) throw std::invalid_argument("config: max_steps must be >= 1");
  ResolvedConfig rc;
  rc.bounds = gershgorin_bounds(A);
  double range = rc.bounds.hi - rc.bounds.lo;
  rc.dt = cfg.dt > 0.0 ? cfg.dt : choose_timestep(rc.bounds, cfg.safety);
  rc.tol_mu = cfg.tol_mu > 0.0 ? cfg.tol_mu : 1e-10 * range * range;
  switch (cfg.schedule) {
    case ScheduleMode::plain:
      rc.offset = 0.0;
      break;
    case ScheduleMode::gap:
      rc.offset = cfg.gap;
      break;
    case ScheduleMode::window:
      rc.offset = cfg.window > 0.0 ? cfg.window : 0.05 * range;
      break;
  }
  return rc;
}

static std::vector<double> start_vector(const SparseSymMatrix& A,
                                        std::span<const double> x0, std::uint64_t seed) {
  if (x0.empty()) return Rng(seed).unit_vector(A.dim());
  if (x0.size() != A.dim())
    throw std::invalid_argument("start vector dimension mismatch");
  return normalized(x0);
}

SolveResult run_inflation(const SparseSymMatrix& A, std::span<const double> x0,
                          const InflationConfig& cfg) {
  ResolvedConfig rc = resolve_config(A, cfg);
  StateVector s{start_vector(A, x0, cfg.seed), std::vector<double>(A.dim(), 0.0)};
  InflationDriver driver(A, std::move(s), rc.dt, rc.offset, cfg.integrator,
                         cfg.normalize_every, cfg.adapt);
  MatvecCounter mc;
  SolveResult out;
  for (std::size_t i = 0; i < cfg.max_steps; ++i) {
    TraceRecord rec = driver.step(mc);
    out.trace.push_back(rec);
    if (rec.mu <= rc.tol_mu) {
      out.converged = true;
      break;
    }
  }
  std::vector<double> v = normalized(driver.eval_point());
  fix_sign(v);
  out.pairs.values = {driver.last_lambda()};
  out.pairs.vectors = {std::move(v)};
  out.pairs.residuals = {driver.last_mu()};
  out.pairs.converged = {out.converged};
  out.matvecs = mc.count;
  return out;
}

// Least-squares slope of ln(mu) against continuous time.
static double fit_log_slope(const std::vector<double>& t, const std::vector<double>& lnmu) {
  double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += lnmu[i];
    stt += t[i] * t[i];
    sty += t[i] * lnmu[i];
  }
  double denom = n * stt - st * st;
  if (denom == 0.0) return 0.0;
  return (n * sty - st * sy) / denom;
}

GapScanResult estimate_gap_scan(const SparseSymMatrix& A, std::span<const double> x0,
                                std::span<const double> candidates,
                                std::size_t probe_steps, const InflationConfig& cfg) {
  if (candidates.empty())
    throw std::invalid_argument("gap scan: candidate list is empty");
  for (double c : candidates)
    if (!(c >= 0.0)) throw std::invalid_argument("gap scan: candidates must be >= 0");
  if (probe_steps < 2) throw std::invalid_argument("gap scan: probe_steps must be >= 2");

  InflationConfig base = cfg;
  base.schedule = ScheduleMode::gap;
  base.gap = candidates[0];
  ResolvedConfig rc = resolve_config(A, base);

  // Burn-in with the first candidate to strip high-lying content.
  StateVector s{start_vector(A, x0, cfg.seed), std::vector<double>(A.dim(), 0.0)};
  InflationDriver burn(A, std::move(s), rc.dt, candidates[0], cfg.integrator,
                       cfg.normalize_every, cfg.adapt);
  MatvecCounter mc;
  for (std::size_t i = 0; i < probe_steps; ++i) burn.step(mc);
  const StateVector burned = burn.state();
  const double dt = burn.dt();

  GapScanResult out;
  out.slopes.assign(candidates.size(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    InflationDriver probe(A, burned, dt, candidates[c], cfg.integrator,
                          cfg.normalize_every, /*adapt=*/false);
    std::vector<double> ts, lnmu;
    bool ok = true;
    try {
      for (std::size_t i = 0; i < probe_steps; ++i) {
        TraceRecord rec = probe.step(mc);
        if (!(rec.mu > 0.0) || !std::isfinite(rec.mu)) {
          ok = rec.mu == 0.0;  // already converged counts as maximal descent
          if (rec.mu == 0.0) {
            ts.push_back(static_cast<double>(i) * dt);
            lnmu.push_back(-745.0);  // ln of smallest double
          }
          break;
        }
        ts.push_back(static_cast<double>(i) * dt);
        lnmu.push_back(std::log(rec.mu));
      }
    } catch (const std::overflow_error&) {
      ok = false;
    }
    if (ok && ts.size() >= 2) out.slopes[c] = fit_log_slope(ts, lnmu);
  }

  out.best_index = 0;
  bool any = false;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!std::isfinite(out.slopes[c])) continue;
    if (!any || out.slopes[c] < out.slopes[out.best_index]) {
      out.best_index = c;
      any = true;
    }
  }
  if (!any)
    throw std::runtime_error("gap scan: all candidates diverged; reduce dt");
  out.best = candidates[out.best_index];
  return out;
}

NormalModeProjection project_normal_modes(const StateVector& s,
                                          const std::vector<std::vector<double>>& basis) {
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != n)
      throw std::invalid_argument("project_normal_modes: basis dimension mismatch");
    for (std::size_t j = i; j < basis.size(); ++j) {
      double d = dot(basis[i], basis[j]) - (i == j ? 1.0 : 0.0);
      if (std::abs(d) > 1e-8)
        throw std::invalid_argument("project_normal_modes: basis not orthonormal");
    }
  }
  NormalModeProjection out;
  out.xi.reserve(basis.size());
  out.pi.reserve(basis.size());
  for (const auto& v : basis) {
    out.xi.push_back(dot(s.x, v));
    out.pi.push_back(dot(s.p, v));
  }
  return out;
}

}  // namespace infl
