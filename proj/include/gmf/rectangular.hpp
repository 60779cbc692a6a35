#pragma once

#include <optional>
#include <string>

#include "gmf/operator_core.hpp"
#include "gmf/poles.hpp"
#include "gmf/scalar_functions.hpp"
#include "gmf/trace.hpp"

namespace gmf {

enum class KrylovMethod { golub_kahan, rational_full, rational_short };

/// Accepts "golub_kahan" (or "gk"), "rational_full", "rational_short".
KrylovMethod parse_method(const std::string& name);
std::string to_string(KrylovMethod method);

/// Dispatches to gk_approximate, rational_gmf_approximate or rgk_run. Poles are ignored by golub_kahan.
KrylovRun krylov_approximate(KrylovMethod method, const ScalarFunction& f, const LinearOperator& op,
                             const VectorRef& b, const PoleSequence& poles, int k_max,
                             const std::optional<Vector>& reference = std::nullopt, bool reorthogonalize = false);

/**
 * f^(A) b computed as (A^+)^T f^(A^T) A b: the Krylov method runs on A^T
 * with start vector A b, and each iterate w_k is mapped back through the
 * minimum-norm least-squares solution of A^T y = w_k. The factorization of
 * A^T is computed once, so the operator must carry a dense payload.
 * `basis` and `projected` of the result refer to the run on A^T.
 */
KrylovRun gmf_via_transpose(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b,
                            KrylovMethod method, const PoleSequence& poles, int k_max,
                            const std::optional<Vector>& reference = std::nullopt, bool reorthogonalize = false);

}  // namespace gmf
