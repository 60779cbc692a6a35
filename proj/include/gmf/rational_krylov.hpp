#pragma once

#include <optional>

#include "gmf/operator_core.hpp"
#include "gmf/poles.hpp"
#include "gmf/scalar_functions.hpp"
#include "gmf/trace.hpp"

namespace gmf {

/**
 * Rational Arnoldi decomposition (A^T A) Q K = Q H on the Gram matrix.
 * Q holds j orthonormal columns and H, K are j x (j-1); j equals the
 * requested dimension unless a lucky breakdown truncated the space.
 */
struct RationalArnoldiFactorization {
  Matrix q;
  Matrix h;
  Matrix k;
  std::vector<double> poles_used;  // xi_1..xi_{columns-1}
  bool invariant = false;

  Index dimension() const noexcept { return q.cols(); }
};

/**
 * Builds an orthonormal basis of the rational Krylov space Q_k(A^T A, b).
 *
 * The (j+1)-th vector orthonormalizes (I - M/xi_j)^{-1} M q_j with
 * M = A^T A: a plain product for xi_j = inf and M^{-1} q_j for xi_j = 0.
 * Modified Gram-Schmidt with one full reorthogonalization pass.
 */
RationalArnoldiFactorization rational_arnoldi(const LinearOperator& op, const VectorRef& b,
                                              const PoleSequence& poles, int k);

/// Orthonormal P, upper triangular B with A Q = P B (QR of A Q, diag(B) >= 0).
struct GmfProjection {
  Matrix p;
  Matrix b;
  bool rank_deficient = false;  // some diag(B) <= 1e-14 ||A Q||
};

GmfProjection project(const LinearOperator& op, const MatrixRef& q);

/**
 * Rational Krylov approximation y_k = ||b|| P_k f^(B_k) e_1 with P_k, B_k
 * from project() on the full-orthogonalization basis.
 */
KrylovRun rational_gmf_approximate(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b,
                                   const PoleSequence& poles, int k_max,
                                   const std::optional<Vector>& reference = std::nullopt);

}  // namespace gmf
