#include "inflate/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "inflate/vec.hpp"

namespace infl {

SparseSymMatrix::SparseSymMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices,
                                 std::vector<double> values)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  validate();
}

void SparseSymMatrix::validate() const {
  if (row_offsets_.size() != n_ + 1)
    throw std::invalid_argument("csr: row_offsets length must be n+1");
  if (row_offsets_.front() != 0)
    throw std::invalid_argument("csr: row_offsets[0] must be 0");
  if (row_offsets_.back() != values_.size() || col_indices_.size() != values_.size())
    throw std::invalid_argument("csr: index/value array lengths inconsistent");
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1])
      throw std::invalid_argument("csr: row_offsets not nondecreasing");
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= n_)
        throw std::invalid_argument("csr: column index out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
        throw std::invalid_argument("csr: columns not strictly increasing in row " +
                                    std::to_string(i));
      if (!std::isfinite(values_[k]))
        throw std::invalid_argument("csr: non-finite value");
    }
  }
  // Symmetry: entry (i,j) must exist as (j,i) with the same value.
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      std::size_t j = col_indices_[k];
      if (j == i) continue;
      auto begin = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[j]);
      auto end = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[j + 1]);
      auto it = std::lower_bound(begin, end, i);
      if (it == end || *it != i)
        throw std::invalid_argument("csr: missing symmetric counterpart of (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      std::size_t kk = static_cast<std::size_t>(it - col_indices_.begin());
      if (values_[kk] != values_[k])
        throw std::invalid_argument("csr: asymmetric values at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }
}

SparseSymMatrix SparseSymMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n)
      throw std::invalid_argument("from_triplets: index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // Sum duplicates in place.
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const auto& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& t : merged) ++offsets[t.row + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::size_t> cols(merged.size());
  std::vector<double> vals(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    cols[k] = merged[k].col;
    vals[k] = merged[k].value;
  }
  return SparseSymMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

void SparseSymMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_)
    throw std::invalid_argument("matvec: dimension mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[col_indices_[k]];
    y[i] = s;
  }
}

std::vector<double> matvec(const SparseSymMatrix& A, std::span<const double> v,
                           MatvecCounter& mc) {
  std::vector<double> y(A.dim());
  A.apply(v, y);
  ++mc.count;
  return y;
}

static void check_nonzero(std::span<const double> x, const char* who) {
  for (double e : x)
    if (e != 0.0) return;
  throw std::invalid_argument(std::string(who) + ": zero vector");
}

double rayleigh_quotient(const SparseSymMatrix& A, std::span<const double> x,
                         std::span<const double> ax) {
  if (x.size() != A.dim()) throw std::invalid_argument("rayleigh: dimension mismatch");
  check_nonzero(x, "rayleigh_quotient");
  return dot(x, ax) / dot(x, x);
}

double rayleigh_quotient(const SparseSymMatrix& A, std::span<const double> x,
                         MatvecCounter& mc) {
  check_nonzero(x, "rayleigh_quotient");
  auto y = matvec(A, x, mc);
  return dot(x, y) / dot(x, x);
}

double residual_measure(const SparseSymMatrix& A, std::span<const double> x,
                        double lambda, std::span<const double> ax) {
  if (x.size() != A.dim()) throw std::invalid_argument("residual: dimension mismatch");
  check_nonzero(x, "residual_measure");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = ax[i] - lambda * x[i];
    s += r * r;
  }
  return s / dot(x, x);
}

double residual_measure(const SparseSymMatrix& A, std::span<const double> x,
                        double lambda, MatvecCounter& mc) {
  check_nonzero(x, "residual_measure");
  auto y = matvec(A, x, mc);
  return residual_measure(A, x, lambda, y);
}

SpectralBounds gershgorin_bounds(const SparseSymMatrix& A) {
  const auto& off = A.row_offsets();
  const auto& col = A.col_indices();
  const auto& val = A.values();
  SpectralBounds b{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < A.dim(); ++i) {
    double diag = 0.0, radius = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      if (col[k] == i)
        diag = val[k];
      else
        radius += std::abs(val[k]);
    }
    b.lo = std::min(b.lo, diag - radius);
    b.hi = std::max(b.hi, diag + radius);
  }
  if (A.dim() == 0) b = {0.0, 0.0};
  return b;
}

}  // namespace infl
