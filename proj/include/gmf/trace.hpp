#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmf/operator_core.hpp"

namespace gmf {

/// One curve of (iteration, value) pairs with strictly increasing iterations.
struct Series {
  std::vector<int> k;
  std::vector<double> value;

  void push(int iteration, double v);
  bool empty() const noexcept { return k.empty(); }
  std::size_t size() const noexcept { return k.size(); }
};

/// Per-iteration diagnostics of a Krylov run.
struct ConvergenceTrace {
  Series error;                // relative 2-norm error against a reference
  Series orthogonality_drift;  // ||I - P_k^T P_k||_2, when tracked
};

enum class StopReason {
  reached_k_max,
  invariant_subspace,  // lucky breakdown: the Krylov space stopped growing
};

/**
 * Outcome of a Krylov approximation of f^(A) b.
 *
 * iterates[k-1] holds y_k. `basis` is P_k (m x k) and `projected` is the
 * k x k upper triangular B_k for the last iteration; the leading j x j block
 * of `projected` is B_j.
 */
struct KrylovRun {
  std::vector<Vector> iterates;
  Matrix basis;
  Matrix projected;
  ConvergenceTrace trace;
  StopReason stop = StopReason::reached_k_max;

  int steps() const noexcept { return static_cast<int>(iterates.size()); }
};

/// Relative error ||y - ref|| / ||ref|| (absolute when ref = 0).
double relative_error(const VectorRef& y, const VectorRef& ref);

}  // namespace gmf
