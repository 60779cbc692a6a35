#pragma once

#include <string>
#include <vector>

#include "gmf/operator_core.hpp"
#include "gmf/scalar_functions.hpp"

namespace gmf {

/// Singular values at or below this fraction of sigma_1 count as zero.
inline constexpr double rank_truncation = 1e-13;

/// Compact SVD A = U_r diag(sigma_r) V_r^T over the numerically nonzero singular values.
struct CompactSvd {
  Matrix u;
  Vector sigma;
  Matrix v;

  Index rank() const noexcept { return sigma.size(); }
};

CompactSvd compact_svd(const MatrixRef& a);

/// f applied to the nonzero singular values: U_r f(Sigma_r) V_r^T.
Matrix gmf_dense(const ScalarFunction& f, const MatrixRef& a);

/// f applied to the nonzero eigenvalues of a symmetric positive semidefinite matrix.
Matrix gmf_symmetric(const ScalarFunction& g, const MatrixRef& s);

/// gmf_dense(f, A) b without forming the full GMF.
Vector gmf_apply_reference(const ScalarFunction& f, const MatrixRef& a, const VectorRef& b);

/// f^(B) e_1 scaled by `scale`, for the small projected matrices of the Krylov methods.
Vector gmf_first_column(const ScalarFunction& f, const MatrixRef& b, double scale);

struct IdentityCheck {
  std::string name;
  double relative_error = 0.0;
  bool passed = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
  std::vector<std::string> violated() const;
};

/**
 * Dense verification of the standard GMF identities:
 * odd polynomials p(z) = q(z^2) z against q(AA^T)A and A q(A^TA);
 * f^(A) against A g^(A^TA) (and A g(A^TA) when f.zero_limit holds);
 * f^(A) against (A^+)^T f^(A^T) A; and A^T f^(A) against f^(A^T) A.
 */
IdentityReport check_identities(const ScalarFunction& f, const MatrixRef& a, double tolerance = 1e-10);

}  // namespace gmf
