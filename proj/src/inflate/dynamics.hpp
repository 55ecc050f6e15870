#pragma once

// The inflation iteration: a second-order discrete map whose shifted
// multiplier lambda_tilde sets the border between exponentially growing
// low eigenmodes and bounded oscillating high ones. Includes time-step
// selection from spectral bounds, adaptive step halving, the gap-scan
// schedule estimator and a normal-mode diagnostic projection.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "inflate/eigenpairs.hpp"
#include "inflate/sparse.hpp"

namespace infl {

enum class Integrator { euler, verlet };
enum class ScheduleMode { plain, gap, window };

struct InflationConfig {
  double dt = 0.0;       // <= 0 selects auto from spectral bounds
  double safety = 0.9;   // fraction of the stability bound
  ScheduleMode schedule = ScheduleMode::window;
  double gap = 0.0;      // epsilon01 estimate for the gap schedule
  double window = 0.0;   // w for the window schedule; <= 0 selects 5% of range
  Integrator integrator = Integrator::euler;
  std::size_t max_steps = 200000;
  double tol_mu = 0.0;   // <= 0 selects 1e-10 * range^2
  std::size_t normalize_every = 1;
  std::uint64_t seed = 12345;
  bool adapt = true;
};

struct StateVector {
  std::vector<double> x;  // coordinates
  std::vector<double> p;  // momenta
};

struct SolveResult {
  EigenpairSet pairs;
  Trace trace;
  std::size_t matvecs = 0;
  bool converged = false;
  // Squared norm of the raw final iterate. Meaningful for methods that do
  // not keep the state on the unit sphere (quartic descent); 1 otherwise.
  double final_x_norm2 = 1.0;
};

// safety * 2/sqrt(hi - lo); hi <= lo (spectrum a point) degenerates to
// dt = safety, any step converges immediately there.
double choose_timestep(const SpectralBounds& bounds, double safety);

// One step of the discrete map with an externally supplied border
// lambda_tilde. Euler: p' = p - (Ax - lt x) dt, x' = x + p' dt. Verlet:
// position-Verlet with the force evaluated at the half-step drift point.
// One matvec either way; the returned lambda reuses that product.
// Throws std::overflow_error if the state leaves the finite range.
double inflation_step(const SparseSymMatrix& A, StateVector& s, double lambda_tilde,
                      double dt, Integrator integrator, MatvecCounter& mc);

// Stepper used by all the dynamical drivers: refreshes lambda from the
// step's own product, applies the schedule offset, normalizes, tracks mu
// growth and halves dt when a run destabilizes.
class InflationDriver {
 public:
  InflationDriver(const SparseSymMatrix& A, StateVector s, double dt, double offset,
                  Integrator integrator, std::size_t normalize_every, bool adapt);

  TraceRecord step(MatvecCounter& mc);

  const StateVector& state() const { return state_; }
  StateVector& state() { return state_; }
  double dt() const { return dt_; }
  double last_lambda() const { return lambda_; }
  double last_mu() const { return mu_; }
  // Coordinates at the point where lambda/mu were last evaluated.
  const std::vector<double>& eval_point() const { return eval_x_; }
  std::size_t steps_taken() const { return step_; }
  int halvings() const { return halvings_; }

  // Restart from a fresh coordinate vector with zero momentum.
  void restart(std::vector<double> x);

 private:
  const SparseSymMatrix& A_;
  StateVector state_;
  double dt_;
  double offset_;
  Integrator integrator_;
  std::size_t normalize_every_;
  bool adapt_;
  std::size_t step_ = 0;
  std::vector<double> eval_x_;
  double lambda_ = 0.0;
  double mu_ = std::numeric_limits<double>::infinity();
  int rising_ = 0;
  int halvings_ = 0;
  double min_mu_ = std::numeric_limits<double>::infinity();
  int since_min_ = 0;
};

struct ResolvedConfig {
  SpectralBounds bounds;
  double dt;
  double tol_mu;
  double offset;
};

// Fill in the auto defaults (dt, tol, schedule offset) for a matrix.
ResolvedConfig resolve_config(const SparseSymMatrix& A, const InflationConfig& cfg);

// Drive the inflation map to the lowest eigenpair. x0 empty: seeded
// random unit vector. Non-convergence is flagged, not thrown.
SolveResult run_inflation(const SparseSymMatrix& A, std::span<const double> x0,
                          const InflationConfig& cfg);

struct GapScanResult {
  double best = 0.0;
  std::size_t best_index = 0;
  std::vector<double> slopes;  // fitted d(ln mu)/dt per candidate; +inf = diverged
};

// Burn in with the first candidate, then probe each candidate from the
// common state and pick the steepest mu descent.
GapScanResult estimate_gap_scan(const SparseSymMatrix& A, std::span<const double> x0,
                                std::span<const double> candidates,
                                std::size_t probe_steps, const InflationConfig& cfg);

struct NormalModeProjection {
  std::vector<double> xi;  // coordinates in the eigenbasis
  std::vector<double> pi;  // momenta in the eigenbasis
};

// Test-only diagnostic: coefficients of (x, p) in a supplied orthonormal
// eigenbasis.
NormalModeProjection project_normal_modes(const StateVector& s,
                                          const std::vector<std::vector<double>>& basis);

}  // namespace infl
