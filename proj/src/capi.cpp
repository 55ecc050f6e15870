#include "inflate.h"

#include <cstring>
#include <new>
#include <span>
#include <stdexcept>
#include <string>

#include "inflate/dynamics.hpp"
#include "inflate/io.hpp"
#include "inflate/sparse.hpp"
#include "inflate/subspace.hpp"
#include "inflate/variants.hpp"

using namespace infl;

struct infl_matrix {
  SparseSymMatrix m;
};

struct infl_result {
  SolveResult r;
};

namespace {

thread_local std::string g_error;

int fail(int code, const char* what) {
  g_error = what;
  return code;
}

template <typename F>
int guarded(F&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(INFL_ERR_INVALID, e.what());
  } catch (const std::overflow_error& e) {
    return fail(INFL_ERR_FAIL, e.what());
  } catch (const std::runtime_error& e) {
    return fail(INFL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(INFL_ERR_FAIL, "out of memory");
  }
}

InflationConfig to_config(const infl_options& o) {
  InflationConfig c;
  c.dt = o.dt;
  c.safety = o.safety;
  c.schedule = o.schedule == INFL_SCHEDULE_PLAIN    ? ScheduleMode::plain
               : o.schedule == INFL_SCHEDULE_GAP    ? ScheduleMode::gap
                                                    : ScheduleMode::window;
  c.gap = o.gap;
  c.window = o.window;
  c.integrator =
      o.integrator == INFL_INTEGRATOR_VERLET ? Integrator::verlet : Integrator::euler;
  c.max_steps = o.max_steps > 0 ? static_cast<std::size_t>(o.max_steps) : 1;
  c.tol_mu = o.tol_mu;
  c.normalize_every =
      o.normalize_every > 0 ? static_cast<std::size_t>(o.normalize_every) : 1;
  c.seed = o.seed;
  c.adapt = o.adapt != 0;
  return c;
}

}  // namespace

extern "C" {

void infl_options_init(infl_options* o) {
  if (!o) return;
  std::memset(o, 0, sizeof *o);
  o->dt = 0.0;
  o->safety = 0.9;
  o->schedule = INFL_SCHEDULE_WINDOW;
  o->gap = 0.0;
  o->window = 0.0;
  o->integrator = INFL_INTEGRATOR_EULER;
  o->max_steps = 200000;
  o->tol_mu = 0.0;
  o->normalize_every = 1;
  o->seed = 12345;
  o->adapt = 1;
  o->k = 1;
  o->basis_size = 6;
  o->period = 6;
  o->want = 1;
  o->dbeta = 0.0;
  o->kappa = 0.0;
  o->damping = -1.0;
  o->tol_grad = 1e-9;
  o->lanczos_m = 100;
  o->lanczos_two_pass = 0;
  o->power_mode = INFL_POWER_SMALLEST_SHIFTED;
}

const char* infl_error_message(void) { return g_error.c_str(); }

const char* infl_version(void) { return "0.1.0"; }

int infl_matrix_read_mtx(const char* path, infl_matrix** out) {
  if (!path || !out) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = new infl_matrix{read_matrix_market_file(path)};
    return INFL_OK;
  });
}

int infl_matrix_write_mtx(const infl_matrix* m, const char* path) {
  if (!m || !path) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    write_matrix_market_file(m->m, path);
    return INFL_OK;
  });
}

int infl_matrix_generate(const char* spec, infl_matrix** out) {
  if (!spec || !out) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = new infl_matrix{generate(GeneratorSpec::parse(spec))};
    return INFL_OK;
  });
}

int infl_matrix_from_csr(size_t n, const size_t* row_offsets, const size_t* col_indices,
                         const double* values, size_t nnz, infl_matrix** out) {
  if (!row_offsets || (!col_indices && nnz) || (!values && nnz) || !out)
    return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = new infl_matrix{SparseSymMatrix(
        n, std::vector<std::size_t>(row_offsets, row_offsets + n + 1),
        std::vector<std::size_t>(col_indices, col_indices + nnz),
        std::vector<double>(values, values + nnz))};
    return INFL_OK;
  });
}

size_t infl_matrix_dim(const infl_matrix* m) { return m ? m->m.dim() : 0; }
size_t infl_matrix_nnz(const infl_matrix* m) { return m ? m->m.nnz() : 0; }

int infl_matrix_bounds(const infl_matrix* m, double* lo, double* hi) {
  if (!m || !lo || !hi) return fail(INFL_ERR_INVALID, "null argument");
  SpectralBounds b = gershgorin_bounds(m->m);
  *lo = b.lo;
  *hi = b.hi;
  return INFL_OK;
}

int infl_matrix_apply(const infl_matrix* m, const double* x, double* y) {
  if (!m || !x || !y) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    m->m.apply(std::span<const double>(x, m->m.dim()),
               std::span<double>(y, m->m.dim()));
    return INFL_OK;
  });
}

void infl_matrix_free(infl_matrix* m) { delete m; }

int infl_solve(const infl_matrix* m, int method, const infl_options* opts,
               const double* x0, infl_result** out) {
  if (!m || !opts || !out) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&]() -> int {
    InflationConfig cfg = to_config(*opts);
    std::span<const double> start =
        x0 ? std::span<const double>(x0, m->m.dim()) : std::span<const double>{};
    SolveResult r;
    switch (method) {
      case INFL_METHOD_INFLATION:
        r = run_inflation(m->m, start, cfg);
        break;
      case INFL_METHOD_WINDOWED:
        r = windowed_solve(m->m, cfg, static_cast<std::size_t>(opts->k), start);
        break;
      case INFL_METHOD_MULTI:
        r = multi_inflation(m->m, static_cast<std::size_t>(opts->k), cfg);
        break;
      case INFL_METHOD_PERIODIC:
        r = periodic_subspace_solve(m->m, cfg,
                                    static_cast<std::size_t>(opts->basis_size),
                                    static_cast<std::size_t>(opts->period),
                                    static_cast<std::size_t>(opts->want));
        break;
      case INFL_METHOD_FIRST_ORDER: {
        FirstOrderConfig fc;
        fc.dbeta = opts->dbeta;
        fc.max_steps = static_cast<std::size_t>(opts->max_steps);
        fc.tol_mu = opts->tol_mu;
        fc.seed = opts->seed;
        r = first_order_descent(m->m, start, fc);
        break;
      }
      case INFL_METHOD_POWER: {
        SpectralBounds b = gershgorin_bounds(m->m);
        double range = b.hi - b.lo;
        double tol = opts->tol_mu > 0.0 ? opts->tol_mu : 1e-10 * range * range;
        r = power_method(m->m,
                         opts->power_mode == INFL_POWER_LARGEST
                             ? PowerMode::largest
                             : PowerMode::smallest_shifted,
                         start, static_cast<std::size_t>(opts->max_steps), tol,
                         opts->seed);
        break;
      }
      case INFL_METHOD_LANCZOS:
        r = lanczos_basic(m->m, start, static_cast<std::size_t>(opts->lanczos_m),
                          opts->lanczos_two_pass != 0, opts->seed);
        break;
      case INFL_METHOD_QUARTIC: {
        QuarticConfig qc;
        qc.kappa = opts->kappa;
        qc.dt = opts->dt;
        qc.damping = opts->damping;
        qc.max_steps = static_cast<std::size_t>(opts->max_steps);
        qc.tol_grad = opts->tol_grad;
        qc.seed = opts->seed;
        r = quartic_descent(m->m, start, qc);
        break;
      }
      default:
        return fail(INFL_ERR_INVALID, "unknown method");
    }
    bool conv = r.converged;
    *out = new infl_result{std::move(r)};
    if (!conv) {
      g_error = "iteration budget exhausted before convergence";
      return INFL_ERR_NOCONV;
    }
    return INFL_OK;
  });
}

int infl_scan_gap(const infl_matrix* m, const infl_options* opts,
                  const double* candidates, size_t ncand, size_t probe_steps,
                  double* best, double* slopes_out) {
  if (!m || !opts || !candidates || !best)
    return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    InflationConfig cfg = to_config(*opts);
    GapScanResult res = estimate_gap_scan(
        m->m, {}, std::span<const double>(candidates, ncand), probe_steps, cfg);
    *best = res.best;
    if (slopes_out)
      for (size_t i = 0; i < ncand; ++i) slopes_out[i] = res.slopes[i];
    return INFL_OK;
  });
}

size_t infl_result_num_pairs(const infl_result* r) { return r ? r->r.pairs.size() : 0; }

double infl_result_value(const infl_result* r, size_t i) {
  return (r && i < r->r.pairs.size()) ? r->r.pairs.values[i] : 0.0;
}

double infl_result_residual(const infl_result* r, size_t i) {
  return (r && i < r->r.pairs.size()) ? r->r.pairs.residuals[i] : -1.0;
}

int infl_result_pair_converged(const infl_result* r, size_t i) {
  return (r && i < r->r.pairs.size()) ? (r->r.pairs.converged[i] ? 1 : 0) : 0;
}

int infl_result_converged(const infl_result* r) {
  return (r && r->r.converged) ? 1 : 0;
}

int infl_result_get_vector(const infl_result* r, size_t i, double* buf) {
  if (!r || !buf || i >= r->r.pairs.size())
    return fail(INFL_ERR_INVALID, "bad pair index");
  const auto& v = r->r.pairs.vectors[i];
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  return INFL_OK;
}

long long infl_result_matvecs(const infl_result* r) {
  return r ? static_cast<long long>(r->r.matvecs) : 0;
}

double infl_result_final_norm2(const infl_result* r) {
  return r ? r->r.final_x_norm2 : 0.0;
}

size_t infl_result_trace_len(const infl_result* r) {
  return r ? r->r.trace.size() : 0;
}

int infl_result_trace_get(const infl_result* r, size_t i, infl_trace_record* rec) {
  if (!r || !rec || i >= r->r.trace.size())
    return fail(INFL_ERR_INVALID, "bad trace index");
  const TraceRecord& t = r->r.trace[i];
  rec->step = t.step;
  rec->m = t.m;
  rec->lambda = t.lambda;
  rec->mu = t.mu;
  rec->dt = t.dt;
  rec->lambda_tilde = t.lambda_tilde;
  return INFL_OK;
}

int infl_result_trace_write_csv(const infl_result* r, const char* path) {
  if (!r || !path) return fail(INFL_ERR_INVALID, "null argument");
  return guarded([&] {
    write_trace_file(r->r.trace, path);
    return INFL_OK;
  });
}

void infl_result_free(infl_result* r) { delete r; }

}  // extern "C"
