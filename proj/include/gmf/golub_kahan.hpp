#pragma once

#include <optional>
#include <vector>

#include "gmf/operator_core.hpp"
#include "gmf/scalar_functions.hpp"
#include "gmf/trace.hpp"

namespace gmf {

/**
 * State of the Golub-Kahan bidiagonalization A Q_k = P_k B_k.
 *
 * B_k is upper bidiagonal with alpha on the diagonal and beta on the
 * superdiagonal. P columns are always kept (the approximation needs them);
 * Q columns only when reorthogonalizing.
 */
struct BidiagonalState {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<Vector> p;  // p_1..p_k
  std::vector<Vector> q;  // q_1..q_k (only with reorthogonalization)
  Vector q_next;          // q_{k+1}; empty once beta_k vanished
  bool reorthogonalize = false;
  double tolerance = 0.0;  // alpha or beta at or below this counts as zero
  bool exhausted = false;  // no further step possible

  int k() const noexcept { return static_cast<int>(alpha.size()); }
  Matrix bidiagonal() const;
  Matrix p_basis() const;
  Matrix q_basis() const;
};

/// Starts from q_1 = b / ||b||. Breakdown tolerance is 1e-14 ||A||_est.
BidiagonalState gk_init(const LinearOperator& op, const VectorRef& b, bool reorthogonalize);

enum class GkStep {
  advanced,        // alpha_k, p_k, beta_k, q_{k+1} computed
  last_column,     // alpha_k and p_k computed but beta_k vanished
  invariant,       // alpha_k vanished; nothing added
};

/**
 * One step: r = A q_k - beta_{k-1} p_{k-1}, alpha_k = ||r||, p_k = r / alpha_k,
 * s = A^T p_k - alpha_k q_k, beta_k = ||s||, q_{k+1} = s / beta_k.
 * Signs are fixed so that alpha_k, beta_k >= 0.
 */
GkStep gk_step(BidiagonalState& state, const LinearOperator& op);

/**
 * Polynomial Krylov approximation y_k = ||b|| P_k f^(B_k) e_1 for k = 1..k_max
 * (or until breakdown). When `reference` is supplied the trace records
 * relative errors against it.
 */
KrylovRun gk_approximate(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b, int k_max,
                         bool reorthogonalize, const std::optional<Vector>& reference = std::nullopt);

}  // namespace gmf
