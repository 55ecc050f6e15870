#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Path to the built binary, injected by the build.
#ifndef INFLATE_CLI_PATH
#error "INFLATE_CLI_PATH must be defined"
#endif

namespace {

int run(const std::string& args, const std::string& out_file = "") {
  std::string cmd = std::string(INFLATE_CLI_PATH) + " " + args;
  if (!out_file.empty()) cmd += " > " + out_file + " 2>&1";
  else cmd += " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return (status >> 8) & 0xff;  // POSIX exit status
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve converges on the path graph and reports exit 0") {
  CHECK(run("solve --gen laplacian1d:100 --method inflation --tol-mu 1e-13",
            "cli_solve.out") == 0);
  std::string out = slurp("cli_solve.out");
  CHECK(out.find("converged") != std::string::npos);
  // lambda0 = 2 - 2 cos(pi/101) = 9.674354160e-04 for this graph
  double value = 0.0;
  REQUIRE(std::sscanf(out.c_str(), "pair 0: value %lf", &value) == 1);
  CHECK(std::abs(value - 9.674354160238430e-04) < 1e-8);
  std::remove("cli_solve.out");
}

TEST_CASE("solve exit codes for non-convergence and bad input") {
  CHECK(run("solve --gen laplacian1d:100 --max-steps 1") == 2);
  CHECK(run("solve cli_missing_file.mtx") == 1);
  CHECK(run("solve --gen bogus:10") == 1);
  CHECK(run("solve --gen laplacian1d:50 --method no-such-method") == 1);
  CHECK(run("nonsense-subcommand") == 1);
}

TEST_CASE("identical seeds give byte-identical trace files") {
  std::string base =
      "solve --gen random_sparse:40:0.2:7 --seed 99 --trace cli_trace_";
  CHECK(run(base + "a.csv") == 0);
  CHECK(run(base + "b.csv") == 0);
  std::string a = slurp("cli_trace_a.csv"), b = slurp("cli_trace_b.csv");
  CHECK(a.size() > 0);
  CHECK(a == b);
  CHECK(run("solve --gen random_sparse:40:0.2:7 --seed 100 --trace cli_trace_c.csv") ==
        0);
  CHECK(slurp("cli_trace_c.csv") != a);
  std::remove("cli_trace_a.csv");
  std::remove("cli_trace_b.csv");
  std::remove("cli_trace_c.csv");
}

TEST_CASE("seed can come from the environment") {
  std::string cmd = std::string("INFLATE_SEED=99 ") + INFLATE_CLI_PATH +
                    " solve --gen random_sparse:40:0.2:7 --trace cli_env.csv"
                    " > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(run("solve --gen random_sparse:40:0.2:7 --seed 99 --trace cli_flag.csv") == 0);
  CHECK(slurp("cli_env.csv") == slurp("cli_flag.csv"));
  std::remove("cli_env.csv");
  std::remove("cli_flag.csv");
}

TEST_CASE("gen prints the matrix shape and is deterministic") {
  CHECK(run("gen laplacian1d:5 -o cli_gen_a.mtx", "cli_gen.out") == 0);
  std::string out = slurp("cli_gen.out");
  CHECK(out.find("n 5") != std::string::npos);
  CHECK(out.find("nnz 13") != std::string::npos);
  CHECK(run("gen random_sparse:50:0.1:7 -o cli_gen_b.mtx") == 0);
  CHECK(run("gen random_sparse:50:0.1:7 -o cli_gen_c.mtx") == 0);
  CHECK(slurp("cli_gen_b.mtx") == slurp("cli_gen_c.mtx"));
  CHECK(run("gen bad-spec") == 1);
  std::remove("cli_gen.out");
  std::remove("cli_gen_a.mtx");
  std::remove("cli_gen_b.mtx");
  std::remove("cli_gen_c.mtx");
}

TEST_CASE("bench compares methods and writes per-method traces") {
  CHECK(run("bench --gen laplacian1d:60 --methods inflation --seed 5") == 1);
  CHECK(run("bench --gen laplacian1d:60 --methods inflation,lanczos --seed 5 "
            "--lanczos-m 60 --trace-prefix cli_bench_",
            "cli_bench.out") == 0);
  std::string out = slurp("cli_bench.out");
  CHECK(out.find("inflation") != std::string::npos);
  CHECK(out.find("lanczos") != std::string::npos);
  CHECK(slurp("cli_bench_inflation.csv").rfind("step,m,lambda", 0) == 0);
  CHECK(slurp("cli_bench_lanczos.csv").rfind("step,m,lambda", 0) == 0);
  std::remove("cli_bench.out");
  std::remove("cli_bench_inflation.csv");
  std::remove("cli_bench_lanczos.csv");
}

TEST_CASE("scan-gap prints slopes and a winner") {
  CHECK(run("gen near_degenerate:12:1.0:3 -o cli_scan.mtx") == 0);
  CHECK(run("scan-gap cli_scan.mtx --candidates 0.5,1.0,2.0 --probe-steps 40",
            "cli_scan.out") == 0);
  std::string out = slurp("cli_scan.out");
  CHECK(out.find("winner") != std::string::npos);
  CHECK(run("scan-gap cli_scan.mtx --candidates 1.0 --probe-steps 20") == 0);
  CHECK(run("scan-gap cli_scan.mtx") == 1);  // empty candidate list
  std::remove("cli_scan.mtx");
  std::remove("cli_scan.out");
}
