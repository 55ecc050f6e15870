#pragma once

// Compressed-sparse-row storage for real symmetric matrices, plus the
// primitive kernels every solver consumes: matvec, Rayleigh quotient,
// residual measure and Gershgorin spectral bounds. The full symmetric
// pattern (both triangles) is stored so the matvec is a branch-free row
// sweep; symmetry is validated at construction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace infl {

// Counts matrix-vector products, the method-neutral cost metric.
struct MatvecCounter {
  std::size_t count = 0;
};

struct SpectralBounds {
  double lo = 0.0;  // lower bound on the spectrum
  double hi = 0.0;  // upper bound on the spectrum
};

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

class SparseSymMatrix {
 public:
  // Takes ownership of CSR arrays; validates structure and symmetry.
  SparseSymMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                  std::vector<std::size_t> col_indices, std::vector<double> values);

  // Builds from a full-pattern triplet list; duplicates are summed,
  // entries are sorted per row, symmetry is validated.
  static SparseSymMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);

  std::size_t dim() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  // y = A x (no counting; use matvec() for counted products).
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  void validate() const;

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

// A*v, incrementing the counter by one.
std::vector<double> matvec(const SparseSymMatrix& A, std::span<const double> v,
                           MatvecCounter& mc);

// x.(Ax)/(x.x). If ax is supplied the product is reused (no matvec);
// otherwise one matvec is spent through mc (which must then be non-null).
double rayleigh_quotient(const SparseSymMatrix& A, std::span<const double> x,
                         std::span<const double> ax);
double rayleigh_quotient(const SparseSymMatrix& A, std::span<const double> x,
                         MatvecCounter& mc);

// mu = |(A - lambda I) x|^2 / |x|^2; zero exactly at an eigenpair.
double residual_measure(const SparseSymMatrix& A, std::span<const double> x,
                        double lambda, std::span<const double> ax);
double residual_measure(const SparseSymMatrix& A, std::span<const double> x,
                        double lambda, MatvecCounter& mc);

// Spectrum enclosure from diagonal entries plus absolute row sums.
SpectralBounds gershgorin_bounds(const SparseSymMatrix& A);

}  // namespace infl
