#pragma once

#include <cstddef>
#include <vector>

namespace infl {

// Ordered eigenpair results. values ascending, vectors unit length and
// pairwise orthonormal, residuals are the mu measure per pair.
struct EigenpairSet {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;
  std::vector<bool> converged;

  std::size_t size() const { return values.size(); }
  bool all_converged() const {
    for (bool c : converged)
      if (!c) return false;
    return !converged.empty();
  }
};

// Per-step convergence history entry.
struct TraceRecord {
  std::size_t step = 0;
  std::size_t m = 0;  // cumulative matvec count
  double lambda = 0.0;
  double mu = 0.0;
  double dt = 0.0;
  double lambda_tilde = 0.0;
};

using Trace = std::vector<TraceRecord>;

}  // namespace infl
