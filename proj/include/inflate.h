/*
 * C API for the inflate extremal-eigenpair library.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return INFL_OK (0) on success; on failure they return a
 * nonzero code and infl_error_message() describes the problem for the
 * calling thread. Solver calls may return INFL_ERR_NOCONV with a valid
 * result object holding the non-converged state.
 */

#ifndef INFLATE_H
#define INFLATE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct infl_matrix infl_matrix;
typedef struct infl_result infl_result;

enum {
  INFL_OK = 0,
  INFL_ERR_INVALID = 1, /* bad arguments or malformed input */
  INFL_ERR_IO = 2,      /* file access or parse failure */
  INFL_ERR_NOCONV = 3,  /* iteration budget exhausted; result still valid */
  INFL_ERR_FAIL = 4     /* numerical failure (overflow, rank collapse) */
};

enum {
  INFL_METHOD_INFLATION = 0,
  INFL_METHOD_WINDOWED = 1,
  INFL_METHOD_MULTI = 2,
  INFL_METHOD_PERIODIC = 3,
  INFL_METHOD_FIRST_ORDER = 4,
  INFL_METHOD_POWER = 5,
  INFL_METHOD_LANCZOS = 6,
  INFL_METHOD_QUARTIC = 7
};

enum { INFL_SCHEDULE_PLAIN = 0, INFL_SCHEDULE_GAP = 1, INFL_SCHEDULE_WINDOW = 2 };
enum { INFL_INTEGRATOR_EULER = 0, INFL_INTEGRATOR_VERLET = 1 };
enum { INFL_POWER_LARGEST = 0, INFL_POWER_SMALLEST_SHIFTED = 1 };

typedef struct infl_options {
  double dt;                /* <= 0: auto from spectral bounds */
  double safety;            /* fraction of the stability bound, default 0.9 */
  int schedule;             /* INFL_SCHEDULE_* */
  double gap;               /* epsilon01 for the gap schedule */
  double window;            /* w for the window schedule; <= 0: 5% of range */
  int integrator;           /* INFL_INTEGRATOR_* */
  long long max_steps;
  double tol_mu;            /* <= 0: 1e-10 * range^2 */
  long long normalize_every;
  unsigned long long seed;
  int adapt;                /* nonzero: halve dt on destabilization */
  long long k;              /* pairs for windowed / multi */
  long long basis_size;     /* periodic subspace size */
  long long period;         /* steps between diagonalizations */
  long long want;           /* pairs returned by periodic */
  double dbeta;             /* first-order step; <= 0: 1/(hi-lo) */
  double kappa;             /* quartic stiffness; <= 0: hi */
  double damping;           /* quartic damping; < 0: sqrt(hi-lo)/10 */
  double tol_grad;          /* quartic gradient tolerance */
  int lanczos_m;            /* Lanczos steps */
  int lanczos_two_pass;     /* charge a second pass of matvecs */
  int power_mode;           /* INFL_POWER_* */
} infl_options;

/* Fill every field with the documented default. */
void infl_options_init(infl_options* opts);

/* Thread-local message for the most recent failure. */
const char* infl_error_message(void);

const char* infl_version(void);

/* ---- matrices ---- */

/* Matrix Market coordinate real symmetric (or general with symmetric
 * content). */
int infl_matrix_read_mtx(const char* path, infl_matrix** out);
int infl_matrix_write_mtx(const infl_matrix* m, const char* path);

/* Generator spec strings: "laplacian1d:N", "random_sparse:N:density:seed",
 * "diag_dominant:N:spread:coupling:seed", "near_degenerate:N:gap:seed". */
int infl_matrix_generate(const char* spec, infl_matrix** out);

/* Full-pattern CSR, validated (structure, finiteness, symmetry). */
int infl_matrix_from_csr(size_t n, const size_t* row_offsets,
                         const size_t* col_indices, const double* values,
                         size_t nnz, infl_matrix** out);

size_t infl_matrix_dim(const infl_matrix* m);
size_t infl_matrix_nnz(const infl_matrix* m);
/* Gershgorin enclosure of the spectrum. */
int infl_matrix_bounds(const infl_matrix* m, double* lo, double* hi);
/* y = A x, caller buffers of length dim. */
int infl_matrix_apply(const infl_matrix* m, const double* x, double* y);
void infl_matrix_free(infl_matrix* m);

/* ---- solving ---- */

/* Runs the selected method. Returns INFL_OK or INFL_ERR_NOCONV with a
 * valid *out either way; other codes leave *out untouched. x0 may be NULL
 * for a seeded random start. */
int infl_solve(const infl_matrix* m, int method, const infl_options* opts,
               const double* x0, infl_result** out);

/* Gap-schedule estimator: burn-in then per-candidate probe of the mu decay
 * slope. slopes_out (length ncand) may be NULL. */
int infl_scan_gap(const infl_matrix* m, const infl_options* opts,
                  const double* candidates, size_t ncand, size_t probe_steps,
                  double* best, double* slopes_out);

/* ---- results ---- */

size_t infl_result_num_pairs(const infl_result* r);
double infl_result_value(const infl_result* r, size_t i);
double infl_result_residual(const infl_result* r, size_t i);
int infl_result_pair_converged(const infl_result* r, size_t i);
int infl_result_converged(const infl_result* r);
/* buf must hold dim doubles. */
int infl_result_get_vector(const infl_result* r, size_t i, double* buf);
long long infl_result_matvecs(const infl_result* r);
double infl_result_final_norm2(const infl_result* r);

typedef struct infl_trace_record {
  size_t step;
  size_t m; /* cumulative matvec count */
  double lambda;
  double mu;
  double dt;
  double lambda_tilde;
} infl_trace_record;

size_t infl_result_trace_len(const infl_result* r);
int infl_result_trace_get(const infl_result* r, size_t i, infl_trace_record* rec);
int infl_result_trace_write_csv(const infl_result* r, const char* path);
void infl_result_free(infl_result* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* INFLATE_H */
