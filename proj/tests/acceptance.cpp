// Acceptance gate: one self-contained check per shipped claim, each
// printing a single [PASS]/[FAIL] line. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "inflate/dynamics.hpp"
#include "inflate/io.hpp"
#include "inflate/subspace.hpp"
#include "inflate/variants.hpp"
#include "inflate/vec.hpp"

using namespace infl;
using namespace testutil;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail,
            double secs) {
  std::printf("[%s] %2d. %-38s %s (%.2fs)\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str(), secs);
  if (!ok) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Spectrum {0, g, then evenly spaced over [0.5, 4]}.
SparseSymMatrix gap_family(double g) {
  std::vector<double> es{0.0, g};
  for (int i = 0; i < 30; ++i) es.push_back(0.5 + 3.5 * i / 29.0);
  return diag(es);
}

// --- 1. eigenpairs are fixed points of the step map -----------------------

void crit1_fixed_point() {
  Timer timer;
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    auto A = random_sparse(30, 0.2, 300 + s);
    auto oracle = dense_oracle(A);
    // Small step: an excited pair's border makes lower modes dynamically
    // unstable, so a near-stability dt would amplify the oracle's rounding
    // residual exponentially and measure that instability, not the map's
    // fixed-point property.
    double dt = choose_timestep(gershgorin_bounds(A), 0.005);
    MatvecCounter mc;
    for (std::size_t e = 0; e < oracle.size(); ++e) {
      StateVector st{oracle.vectors[e], std::vector<double>(30, 0.0)};
      for (int step = 0; step < 100; ++step) {
        auto before = st.x;
        inflation_step(A, st, oracle.values[e], dt, Integrator::euler, mc);
        for (std::size_t i = 0; i < 30; ++i)
          worst = std::max(worst, std::abs(st.x[i] - before[i]));
      }
    }
  }
  std::ostringstream d;
  d << "max per-step drift " << worst;
  report(1, "eigenpair fixed-point invariance", worst < 1e-14, d.str(),
         timer.secs());
}

// --- 2. step count scales like 1/sqrt(gap) --------------------------------

void crit2_sqrt_gap_scaling() {
  Timer timer;
  std::vector<double> lg, ls;
  for (double g : {1e-1, 1e-2, 1e-3}) {
    InflationConfig cfg;
    cfg.schedule = ScheduleMode::gap;
    cfg.gap = g;
    cfg.tol_mu = 1e-10;
    cfg.seed = 42;
    // Start near the ground vector so the count measures the asymptotic
    // rate; from a random start the early transient (border at lambda + g
    // with lambda still large) converges at an O(1) rate independent of g
    // and washes out the scaling.
    Rng rng(42);
    auto x0 = rng.unit_vector(32);
    scale(0.1, x0);
    x0[0] += 1.0;
    auto res = run_inflation(gap_family(g), x0, cfg);
    if (!res.converged) {
      report(2, "sqrt-gap step scaling", false, "run did not converge",
             timer.secs());
      return;
    }
    lg.push_back(std::log(g));
    ls.push_back(std::log(double(res.trace.size())));
  }
  double slope = fit_slope(lg, ls);
  std::ostringstream d;
  d << "slope " << slope << " (want -0.5 +- 0.1)";
  report(2, "sqrt-gap step scaling", std::abs(slope + 0.5) < 0.1, d.str(),
         timer.secs());
}

// --- 3. first-order baseline scales like 1/gap ----------------------------

void crit3_first_order_scaling() {
  Timer timer;
  std::vector<double> lg, ls;
  for (double g : {1e-1, 1e-2, 1e-3}) {
    FirstOrderConfig cfg;
    cfg.tol_mu = 1e-10;
    cfg.seed = 42;
    auto res = first_order_descent(gap_family(g), {}, cfg);
    if (!res.converged) {
      report(3, "first-order inverse-gap scaling", false, "run did not converge",
             timer.secs());
      return;
    }
    lg.push_back(std::log(g));
    ls.push_back(std::log(double(res.trace.size())));
  }
  double slope = fit_slope(lg, ls);
  std::ostringstream d;
  d << "slope " << slope << " (want -1.0 +- 0.15)";
  report(3, "first-order inverse-gap scaling", std::abs(slope + 1.0) < 0.15,
         d.str(), timer.secs());
}

// --- 4. stability boundary and recovery -----------------------------------

void crit4_stability_boundary() {
  Timer timer;
  auto A = generate(GeneratorSpec::parse("laplacian1d:200"));
  const double wmax = 2.0;  // range is exactly [0, 4]
  InflationConfig cfg;
  cfg.seed = 11;

  cfg.dt = 0.9 * 2.0 / wmax;
  bool safe_ok = run_inflation(A, {}, cfg).converged;

  cfg.dt = 1.1 * 2.0 / wmax;
  cfg.adapt = false;
  cfg.max_steps = 200;
  bool grew = false;
  try {
    auto res = run_inflation(A, {}, cfg);
    double min_mu = res.trace[0].mu;
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      if (res.trace[i].mu > 10.0 * min_mu) grew = true;
      min_mu = std::min(min_mu, res.trace[i].mu);
    }
  } catch (const std::overflow_error&) {
    grew = true;  // outright overflow also counts as growth
  }

  cfg.adapt = true;
  cfg.max_steps = 200000;
  auto rec = run_inflation(A, {}, cfg);
  bool recovered = rec.converged && rec.trace.back().dt < cfg.dt;

  std::ostringstream d;
  d << "safe=" << safe_ok << " grew=" << grew << " recovered=" << recovered;
  report(4, "stability boundary and recovery", safe_ok && grew && recovered,
         d.str(), timer.secs());
}

// --- 5. mu decays at twice the border offset ------------------------------

void crit5_mu_decay() {
  Timer timer;
  std::vector<double> es;
  for (int i = 0; i < 10; ++i) es.push_back(double(i));
  auto D = diag(es);
  InflationConfig cfg;
  cfg.schedule = ScheduleMode::gap;
  cfg.gap = 1.0;  // border held at lambda + 1
  cfg.dt = 0.1 * 2.0 / 3.0;
  cfg.tol_mu = 1e-14;
  cfg.seed = 20;
  auto res = run_inflation(D, {}, cfg);
  std::vector<double> ts, lm;
  for (const auto& r : res.trace)
    if (r.mu < 1e-2 && r.mu > 1e-9) {
      ts.push_back(double(r.step) * cfg.dt);
      lm.push_back(std::log(r.mu));
    }
  double slope = ts.size() >= 10 ? fit_slope(ts, lm) : 0.0;
  std::ostringstream d;
  d << "decay exponent " << -slope << " (want 2 +- 20%)";
  report(5, "mu decay law", std::abs(-slope - 2.0) < 0.4, d.str(), timer.secs());
}

// --- 6. optimal-rate growth of the ground mode ----------------------------

void crit6_optimal_rate() {
  Timer timer;
  auto D = diag({0.0, 1.0, 5.0});
  const double dt = 0.02;
  Rng rng(33);
  StateVector s{rng.unit_vector(3), std::vector<double>(3, 0.0)};
  MatvecCounter mc;
  std::vector<double> ts, lr;
  for (int step = 0; step < 2500; ++step) {
    inflation_step(D, s, 1.0, dt, Integrator::euler, mc);
    double nx = norm2(s.x);
    scale(1.0 / nx, s.x);
    scale(1.0 / nx, s.p);
    double t = (step + 1) * dt;
    if (t > 20.0 && t < 40.0 && s.x[1] != 0.0) {
      ts.push_back(t);
      lr.push_back(std::log(std::abs(s.x[0] / s.x[1])));
    }
  }
  double slope = fit_slope(ts, lr);
  std::ostringstream d;
  d << "growth exponent " << slope << " (want 1 +- 10%)";
  report(6, "optimal-rate mode separation", std::abs(slope - 1.0) < 0.1, d.str(),
         timer.secs());
}

// --- 7. windowed near-degenerate resolution -------------------------------

void crit7_windowed() {
  Timer timer;
  auto A = generate(GeneratorSpec::parse("near_degenerate:50:1e-6:3"));
  auto oracle = dense_oracle(A);
  InflationConfig cfg;
  cfg.window = 0.5;
  cfg.seed = 7;
  auto res = windowed_solve(A, cfg, 2);
  bool resolved = res.pairs.size() >= 2 && res.pairs.residuals[0] < 1e-8 &&
                  res.pairs.residuals[1] < 1e-8 &&
                  std::abs(res.pairs.values[0] - oracle.values[0]) < 1e-10 &&
                  std::abs(res.pairs.values[1] - oracle.values[1]) < 1e-10;

  // Plain (gap-schedule) inflation with the same matvec budget cannot
  // certify the splitting: its residual stays far above gap^2.
  InflationConfig plain;
  plain.schedule = ScheduleMode::gap;
  plain.gap = 1e-6;
  plain.seed = 7;
  plain.max_steps = res.matvecs;
  auto pr = run_inflation(A, {}, plain);
  double gap2 = 1e-12;
  bool plain_fails = pr.pairs.residuals[0] > gap2;

  std::ostringstream d;
  d << "residuals " << res.pairs.residuals[0] << "/" << res.pairs.residuals[1]
    << ", plain mu " << pr.pairs.residuals[0] << " in " << res.matvecs
    << " matvecs";
  report(7, "windowed near-degenerate solve", resolved && plain_fails, d.str(),
         timer.secs());
}

// --- 8. multi-vector and periodic subspace agreement ----------------------

void crit8_multi_and_periodic() {
  Timer timer;
  auto A = random_sparse(200, 0.03, 404);
  auto oracle = dense_oracle(A);
  InflationConfig cfg;
  cfg.seed = 15;
  cfg.tol_mu = 1e-12;

  auto mi = multi_inflation(A, 4, cfg);
  auto ps = periodic_subspace_solve(A, cfg, 6, 6, 4);
  bool ok = mi.pairs.size() == 4 && ps.pairs.size() == 4;
  double worst = 0.0;
  for (std::size_t e = 0; ok && e < 4; ++e) {
    worst = std::max(worst, std::abs(mi.pairs.values[e] - oracle.values[e]));
    worst = std::max(worst, std::abs(ps.pairs.values[e] - oracle.values[e]));
  }
  ok = ok && worst < 1e-8;
  std::ostringstream d;
  d << "worst value error " << worst << "; matvecs multi=" << mi.matvecs
    << " periodic=" << ps.matvecs;
  report(8, "multi-vector and periodic solves", ok, d.str(), timer.secs());
}

// --- 9. quartic soft-constraint solver -------------------------------------

void crit9_quartic() {
  Timer timer;
  bool ok = true;
  double worst_val = 0.0, worst_norm = 0.0, worst_kappa = 0.0;
  for (int s = 0; s < 20 && ok; ++s) {
    auto A = random_sparse(20, 0.3, 500 + s);
    auto oracle = dense_oracle(A);
    double e0 = oracle.values[0];
    double hi = gershgorin_bounds(A).hi;
    QuarticConfig cfg;
    cfg.kappa = hi;
    for (int start = 0; start < 50 && ok; ++start) {
      cfg.seed = 9000 + 50 * s + start;
      auto res = quartic_descent(A, {}, cfg);
      ok = ok && res.converged;
      worst_val = std::max(worst_val, std::abs(res.pairs.values[0] - e0));
      worst_norm = std::max(
          worst_norm, std::abs(res.final_x_norm2 - (1.0 - e0 / (2.0 * cfg.kappa))));
    }
    // Stiffness independence on one start per matrix.
    QuarticConfig c2 = cfg;
    c2.seed = 77;
    auto r1 = quartic_descent(A, {}, c2);
    c2.kappa = 2.0 * hi;
    auto r2 = quartic_descent(A, {}, c2);
    worst_kappa = std::max(worst_kappa,
                           std::abs(r1.pairs.values[0] - r2.pairs.values[0]));
    worst_kappa = std::max(
        worst_kappa, 1.0 - std::abs(dot(r1.pairs.vectors[0], r2.pairs.vectors[0])));
  }
  ok = ok && worst_val < 1e-6 && worst_norm < 1e-6 && worst_kappa < 1e-6;
  std::ostringstream d;
  d << "value err " << worst_val << ", norm err " << worst_norm
    << ", stiffness spread " << worst_kappa;
  report(9, "quartic soft-constraint solver", ok, d.str(), timer.secs());
}

// --- 10. oracle layer -------------------------------------------------------

void crit10_oracle_layer() {
  Timer timer;
  double worst = 0.0;
  Rng rng(60);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + std::size_t(rng.uniform(0.0, 48.999));
    DenseSymMatrix M(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double v = rng.uniform(-1.0, 1.0);
        M.at(i, j) = v;
        M.at(j, i) = v;
      }
    auto ep = jacobi_dense_eigen(M);
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t i = 0; i < n; ++i) {
        double r = -ep.values[e] * ep.vectors[e][i];
        for (std::size_t j = 0; j < n; ++j) r += M.at(i, j) * ep.vectors[e][j];
        worst = std::max(worst, std::abs(r));
      }
  }

  double worst_lz = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    auto A = random_sparse(n, 0.6, 700 + n);
    auto oracle = dense_oracle(A);
    Rng r2(80 + n);
    auto res = lanczos_basic(A, r2.unit_vector(n), n);
    if (res.pairs.size() != n) {
      worst_lz = 1.0;  // breakdown left the space incomplete for this start
      continue;
    }
    for (std::size_t e = 0; e < n; ++e)
      worst_lz = std::max(worst_lz, std::abs(res.pairs.values[e] - oracle.values[e]));
  }
  std::ostringstream d;
  d << "jacobi residual " << worst << ", complete-krylov error " << worst_lz;
  report(10, "dense oracle and complete krylov", worst < 1e-10 && worst_lz < 1e-10,
         d.str(), timer.secs());
}

// --- 11. determinism and serialization -------------------------------------

void crit11_determinism_io() {
  Timer timer;
  auto A = random_sparse(50, 0.15, 808);
  InflationConfig cfg;
  cfg.seed = 5;
  auto r1 = run_inflation(A, {}, cfg);
  auto r2 = run_inflation(A, {}, cfg);
  bool same_trace = r1.trace.size() == r2.trace.size();
  for (std::size_t i = 0; same_trace && i < r1.trace.size(); ++i)
    same_trace = r1.trace[i].lambda == r2.trace[i].lambda &&
                 r1.trace[i].mu == r2.trace[i].mu &&
                 r1.trace[i].m == r2.trace[i].m;

  std::ostringstream mtx;
  write_matrix_market(A, mtx);
  std::istringstream back(mtx.str());
  auto B = read_matrix_market(back);
  bool mtx_ok = A.row_offsets() == B.row_offsets() &&
                A.col_indices() == B.col_indices() && A.values() == B.values();

  std::ostringstream tr;
  write_trace(r1.trace, tr);
  std::istringstream trb(tr.str());
  auto t2 = read_trace(trb);
  bool trace_ok = t2.size() == r1.trace.size();
  for (std::size_t i = 0; trace_ok && i < t2.size(); ++i)
    trace_ok = t2[i].lambda == r1.trace[i].lambda && t2[i].mu == r1.trace[i].mu &&
               t2[i].dt == r1.trace[i].dt;

  std::ostringstream d;
  d << "trace repeat=" << same_trace << " mtx roundtrip=" << mtx_ok
    << " trace roundtrip=" << trace_ok;
  report(11, "determinism and serialization", same_trace && mtx_ok && trace_ok,
         d.str(), timer.secs());
}

}  // namespace

int main() {
  crit1_fixed_point();
  crit2_sqrt_gap_scaling();
  crit3_first_order_scaling();
  crit4_stability_boundary();
  crit5_mu_decay();
  crit6_optimal_rate();
  crit7_windowed();
  crit8_multi_and_periodic();
  crit9_quartic();
  crit10_oracle_layer();
  crit11_determinism_io();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
