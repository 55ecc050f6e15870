// Command-line front end for the inflate shared library. Talks to the
// solver exclusively through the C API in inflate.h.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "inflate.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;  // usage or input error
constexpr int kExitNoConv = 2;

struct MatrixSource {
  std::string path;  // Matrix Market file
  std::string gen;   // generator spec string
};

void add_matrix_source(CLI::App* cmd, MatrixSource& src) {
  auto* file = cmd->add_option("matrix", src.path, "Matrix Market file");
  auto* gen = cmd->add_option("--gen", src.gen,
                              "generator spec, e.g. laplacian1d:100 or "
                              "random_sparse:50:0.1:7");
  file->excludes(gen);
}

// Returns nullptr and prints a diagnostic on failure.
infl_matrix* open_matrix(const MatrixSource& src) {
  infl_matrix* m = nullptr;
  int rc;
  if (!src.gen.empty()) {
    rc = infl_matrix_generate(src.gen.c_str(), &m);
  } else if (!src.path.empty()) {
    rc = infl_matrix_read_mtx(src.path.c_str(), &m);
  } else {
    std::fprintf(stderr, "error: provide a matrix file or --gen SPEC\n");
    return nullptr;
  }
  if (rc != INFL_OK) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    return nullptr;
  }
  return m;
}

unsigned long long default_seed() {
  if (const char* env = std::getenv("INFLATE_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    std::fprintf(stderr, "warning: ignoring non-numeric INFLATE_SEED\n");
  }
  infl_options defaults;
  infl_options_init(&defaults);
  return defaults.seed;
}

struct MethodEntry {
  const char* name;
  int id;
};

constexpr MethodEntry kMethods[] = {
    {"inflation", INFL_METHOD_INFLATION}, {"windowed", INFL_METHOD_WINDOWED},
    {"multi", INFL_METHOD_MULTI},         {"periodic", INFL_METHOD_PERIODIC},
    {"first-order", INFL_METHOD_FIRST_ORDER},
    {"power", INFL_METHOD_POWER},         {"lanczos", INFL_METHOD_LANCZOS},
    {"quartic", INFL_METHOD_QUARTIC},
};

int method_id(const std::string& name) {
  for (const auto& m : kMethods)
    if (name == m.name) return m.id;
  return -1;
}

// Shared numeric flags, mirrored onto an infl_options struct.
void add_solver_flags(CLI::App* cmd, infl_options& o) {
  cmd->add_option("--dt", o.dt, "time step (<=0: auto from spectral bounds)");
  cmd->add_option("--safety", o.safety, "fraction of the stability bound");
  cmd->add_option("--schedule", o.schedule,
                  "multiplier schedule: 0 plain, 1 gap, 2 window");
  cmd->add_option("--gap", o.gap, "gap estimate for schedule 1");
  cmd->add_option("--window", o.window, "window for schedule 2 (<=0: 5% of range)");
  cmd->add_option("--integrator", o.integrator, "0 euler, 1 verlet");
  cmd->add_option("--max-steps", o.max_steps, "iteration budget");
  cmd->add_option("--tol-mu", o.tol_mu,
                  "residual tolerance (<=0: 1e-10 * range^2)");
  cmd->add_option("--normalize-every", o.normalize_every, "normalization stride");
  cmd->add_option("--seed", o.seed, "RNG seed (default from INFLATE_SEED)");
  cmd->add_flag("--no-adapt", [&o](std::int64_t) { o.adapt = 0; },
                "disable adaptive step halving");
  cmd->add_option("--k", o.k, "pairs for windowed / multi methods");
  cmd->add_option("--basis-size", o.basis_size, "periodic subspace size");
  cmd->add_option("--period", o.period, "steps between diagonalizations");
  cmd->add_option("--want", o.want, "pairs returned by the periodic method");
  cmd->add_option("--dbeta", o.dbeta, "first-order step (<=0: 1/(hi-lo))");
  cmd->add_option("--kappa", o.kappa, "quartic stiffness (<=0: hi)");
  cmd->add_option("--damping", o.damping, "quartic damping (<0: sqrt(hi-lo)/10)");
  cmd->add_option("--tol-grad", o.tol_grad, "quartic gradient tolerance");
  cmd->add_option("--lanczos-m", o.lanczos_m, "Lanczos steps");
  cmd->add_flag("--lanczos-two-pass", [&o](std::int64_t) { o.lanczos_two_pass = 1; },
                "charge a second matvec pass for eigenvector reconstruction");
  cmd->add_option("--power-mode", o.power_mode, "0 largest, 1 smallest-shifted");
}

void print_pairs(const infl_result* r) {
  size_t k = infl_result_num_pairs(r);
  for (size_t i = 0; i < k; ++i)
    std::printf("pair %zu: value %.12e  residual %.3e  %s\n", i,
                infl_result_value(r, i), infl_result_residual(r, i),
                infl_result_pair_converged(r, i) ? "converged" : "not converged");
}

int write_vectors(const infl_result* r, size_t dim, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    return kExitUsage;
  }
  std::vector<double> buf(dim);
  for (size_t i = 0; i < infl_result_num_pairs(r); ++i) {
    infl_result_get_vector(r, i, buf.data());
    for (size_t j = 0; j < dim; ++j)
      std::fprintf(f, "%.17g%c", buf[j], j + 1 == dim ? '\n' : ' ');
  }
  std::fclose(f);
  return kExitOk;
}

int run_solve(const MatrixSource& src, int method, const infl_options& opts,
              const std::string& trace_path, const std::string& vectors_path) {
  infl_matrix* m = open_matrix(src);
  if (!m) return kExitUsage;

  auto t0 = std::chrono::steady_clock::now();
  infl_result* res = nullptr;
  int rc = infl_solve(m, method, &opts, nullptr, &res);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  if (rc != INFL_OK && rc != INFL_ERR_NOCONV) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    infl_matrix_free(m);
    return kExitUsage;
  }

  print_pairs(res);
  std::printf("matvecs %lld  wall %.3fs  %s\n", infl_result_matvecs(res), secs,
              infl_result_converged(res) ? "converged" : "NOT converged");
  int exit_code = infl_result_converged(res) ? kExitOk : kExitNoConv;

  if (!trace_path.empty() &&
      infl_result_trace_write_csv(res, trace_path.c_str()) != INFL_OK) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    exit_code = kExitUsage;
  }
  if (!vectors_path.empty()) {
    int w = write_vectors(res, infl_matrix_dim(m), vectors_path);
    if (w != kExitOk) exit_code = w;
  }
  infl_result_free(res);
  infl_matrix_free(m);
  return exit_code;
}

// First cumulative matvec count at which the trace reaches mu <= threshold.
long long matvecs_to(const infl_result* r, double threshold) {
  size_t n = infl_result_trace_len(r);
  infl_trace_record rec;
  for (size_t i = 0; i < n; ++i) {
    infl_result_trace_get(r, i, &rec);
    if (rec.mu <= threshold) return static_cast<long long>(rec.m);
  }
  return -1;
}

int run_bench(const MatrixSource& src, const std::vector<std::string>& methods,
              const infl_options& opts, const std::string& trace_prefix) {
  if (methods.size() < 2) {
    std::fprintf(stderr, "error: bench needs at least two methods\n");
    return kExitUsage;
  }
  infl_matrix* m = open_matrix(src);
  if (!m) return kExitUsage;

  std::printf("%-12s %12s %12s %12s %16s  %s\n", "method", "m(mu<1e-4)",
              "m(mu<1e-8)", "m(mu<1e-12)", "lambda0", "status");
  bool all_ok = true;
  for (const auto& name : methods) {
    int id = method_id(name);
    if (id < 0) {
      std::printf("%-12s %12s %12s %12s %16s  unknown method\n", name.c_str(), "-",
                  "-", "-", "-");
      all_ok = false;
      continue;
    }
    infl_result* res = nullptr;
    int rc = infl_solve(m, id, &opts, nullptr, &res);
    if (rc != INFL_OK && rc != INFL_ERR_NOCONV) {
      std::printf("%-12s %12s %12s %12s %16s  failed: %s\n", name.c_str(), "-", "-",
                  "-", "-", infl_error_message());
      all_ok = false;
      continue;
    }
    auto cell = [](long long v) {
      return v < 0 ? std::string("-") : std::to_string(v);
    };
    std::printf("%-12s %12s %12s %12s %16.9e  %s\n", name.c_str(),
                cell(matvecs_to(res, 1e-4)).c_str(),
                cell(matvecs_to(res, 1e-8)).c_str(),
                cell(matvecs_to(res, 1e-12)).c_str(), infl_result_value(res, 0),
                infl_result_converged(res) ? "converged" : "not converged");
    if (!infl_result_converged(res)) all_ok = false;
    if (!trace_prefix.empty()) {
      std::string path = trace_prefix + name + ".csv";
      if (infl_result_trace_write_csv(res, path.c_str()) != INFL_OK) {
        std::fprintf(stderr, "error: %s\n", infl_error_message());
        all_ok = false;
      }
    }
    infl_result_free(res);
  }
  infl_matrix_free(m);
  return all_ok ? kExitOk : kExitNoConv;
}

int run_gen(const std::string& spec, const std::string& out_path) {
  infl_matrix* m = nullptr;
  if (infl_matrix_generate(spec.c_str(), &m) != INFL_OK) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    return kExitUsage;
  }
  double lo = 0.0, hi = 0.0;
  infl_matrix_bounds(m, &lo, &hi);
  std::printf("n %zu  nnz %zu  bounds [%.9g, %.9g]\n", infl_matrix_dim(m),
              infl_matrix_nnz(m), lo, hi);
  int rc = kExitOk;
  if (!out_path.empty() && infl_matrix_write_mtx(m, out_path.c_str()) != INFL_OK) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    rc = kExitUsage;
  }
  infl_matrix_free(m);
  return rc;
}

int run_scan_gap(const MatrixSource& src, const std::vector<double>& candidates,
                 size_t probe_steps, const infl_options& opts) {
  if (candidates.empty()) {
    std::fprintf(stderr, "error: scan-gap needs at least one candidate\n");
    return kExitUsage;
  }
  infl_matrix* m = open_matrix(src);
  if (!m) return kExitUsage;

  double best = 0.0;
  std::vector<double> slopes(candidates.size(), 0.0);
  int rc = infl_scan_gap(m, &opts, candidates.data(), candidates.size(), probe_steps,
                         &best, slopes.data());
  infl_matrix_free(m);
  if (rc != INFL_OK) {
    std::fprintf(stderr, "error: %s\n", infl_error_message());
    if (rc == INFL_ERR_INVALID) return kExitUsage;
    std::fprintf(stderr, "hint: every candidate diverged; reduce --dt\n");
    return kExitNoConv;
  }
  std::printf("%16s %16s\n", "candidate", "slope");
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (std::isfinite(slopes[i]))
      std::printf("%16.9g %16.9g\n", candidates[i], slopes[i]);
    else
      std::printf("%16.9g %16s\n", candidates[i], "diverged");
  }
  std::printf("winner %.9g\n", best);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inflate: sparse symmetric extremal eigenpairs by inflation "
               "dynamics (library " +
               std::string(infl_version()) + ")"};
  app.require_subcommand(1);

  infl_options opts;
  infl_options_init(&opts);
  opts.seed = default_seed();

  // solve
  MatrixSource solve_src;
  std::string method_name = "inflation";
  std::string trace_path, vectors_path;
  auto* solve = app.add_subcommand("solve", "solve for extremal eigenpairs");
  add_matrix_source(solve, solve_src);
  solve->add_option("--method", method_name,
                    "inflation|windowed|multi|periodic|first-order|power|"
                    "lanczos|quartic");
  solve->add_option("--trace", trace_path, "write the convergence trace CSV here");
  solve->add_option("--vectors", vectors_path, "write eigenvectors (one per line)");
  add_solver_flags(solve, opts);

  // bench
  MatrixSource bench_src;
  std::vector<std::string> bench_methods;
  std::string trace_prefix;
  auto* bench = app.add_subcommand("bench", "compare methods on one matrix");
  add_matrix_source(bench, bench_src);
  bench->add_option("--methods", bench_methods, "two or more method names")
      ->delimiter(',');
  bench->add_option("--trace-prefix", trace_prefix,
                    "write one trace per method: PREFIX<method>.csv");
  add_solver_flags(bench, opts);

  // gen
  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "generate a test matrix");
  gen->add_option("spec", gen_spec, "generator spec")->required();
  gen->add_option("-o,--output", gen_out, "Matrix Market output path");

  // scan-gap
  MatrixSource scan_src;
  std::vector<double> candidates;
  size_t probe_steps = 200;
  auto* scan = app.add_subcommand("scan-gap", "probe gap candidates by mu decay");
  add_matrix_source(scan, scan_src);
  scan->add_option("--candidates", candidates, "gap candidates")->delimiter(',');
  scan->add_option("--probe-steps", probe_steps, "steps per candidate probe");
  add_solver_flags(scan, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  if (solve->parsed()) {
    int id = method_id(method_name);
    if (id < 0) {
      std::fprintf(stderr, "error: unknown method '%s'\n", method_name.c_str());
      return kExitUsage;
    }
    return run_solve(solve_src, id, opts, trace_path, vectors_path);
  }
  if (bench->parsed()) return run_bench(bench_src, bench_methods, opts, trace_prefix);
  if (gen->parsed()) return run_gen(gen_spec, gen_out);
  if (scan->parsed()) return run_scan_gap(scan_src, candidates, probe_steps, opts);
  return kExitUsage;
}
