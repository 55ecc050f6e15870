#pragma once

// Matrix Market ingestion/serialization, deterministic test-matrix
// generators and the CSV trace format.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "inflate/eigenpairs.hpp"
#include "inflate/sparse.hpp"

namespace infl {

// Coordinate real symmetric (or general with symmetric content). Stored
// triangles of symmetric files are mirrored, duplicates summed, symmetry
// validated. Parse errors carry the line number.
SparseSymMatrix read_matrix_market(std::istream& in);
SparseSymMatrix read_matrix_market_file(const std::string& path);

// Lower triangle with a symmetric header; read(write(A)) == A exactly.
void write_matrix_market(const SparseSymMatrix& A, std::ostream& out);
void write_matrix_market_file(const SparseSymMatrix& A, const std::string& path);

enum class GeneratorKind { laplacian1d, random_sparse, diag_dominant, near_degenerate };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::laplacian1d;
  std::size_t n = 2;
  double density = 0.1;   // random_sparse
  double spread = 1.0;    // diag_dominant
  double coupling = 0.1;  // diag_dominant
  double gap = 1e-6;      // near_degenerate
  std::uint64_t seed = 0;

  // "laplacian1d:100", "random_sparse:50:0.1:7",
  // "diag_dominant:100:10:0.5:3", "near_degenerate:10:1e-6:3"
  static GeneratorSpec parse(const std::string& text);
};

SparseSymMatrix generate(const GeneratorSpec& spec);

// CSV with header "step,m,lambda,mu,dt,lambda_tilde", 17 significant digits.
void write_trace(const Trace& trace, std::ostream& out);
void write_trace_file(const Trace& trace, const std::string& path);
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

}  // namespace infl
