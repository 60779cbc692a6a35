#include "gmf/rectangular.hpp"

#include "gmf/errors.hpp"
#include "gmf/golub_kahan.hpp"
#include "gmf/rational_golub_kahan.hpp"
#include "gmf/rational_krylov.hpp"

namespace gmf {

KrylovMethod parse_method(const std::string& name) {
  if (name == "golub_kahan" || name == "gk") return KrylovMethod::golub_kahan;
  if (name == "rational_full") return KrylovMethod::rational_full;
  if (name == "rational_short") return KrylovMethod::rational_short;
  throw InvalidArgument("unknown method '" + name + "' (expected golub_kahan, rational_full or rational_short)");
}

std::string to_string(KrylovMethod method) {
  switch (method) {
    case KrylovMethod::golub_kahan: return "golub_kahan";
    case KrylovMethod::rational_full: return "rational_full";
    case KrylovMethod::rational_short: return "rational_short";
  }
  return "unknown";
}

KrylovRun krylov_approximate(KrylovMethod method, const ScalarFunction& f, const LinearOperator& op,
                             const VectorRef& b, const PoleSequence& poles, int k_max,
                             const std::optional<Vector>& reference, bool reorthogonalize) {
  switch (method) {
    case KrylovMethod::golub_kahan: return gk_approximate(f, op, b, k_max, reorthogonalize, reference);
    case KrylovMethod::rational_full: return rational_gmf_approximate(f, op, b, poles, k_max, reference);
    case KrylovMethod::rational_short: return rgk_run(f, op, b, poles, k_max, reference).run;
  }
  throw InvalidArgument("krylov_approximate: unknown method");
}

KrylovRun gmf_via_transpose(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b,
                            KrylovMethod method, const PoleSequence& poles, int k_max,
                            const std::optional<Vector>& reference, bool reorthogonalize) {
  if (!op.has_dense()) throw InvalidArgument("gmf_via_transpose: needs a dense operator for the least-squares solve");
  if (b.size() != op.cols()) throw DimensionMismatch("gmf_via_transpose: b has wrong length");
  if (!(b.norm() > 0.0)) throw InvalidArgument("gmf_via_transpose: b must be nonzero");
  if (reference && reference->size() != op.rows())
    throw DimensionMismatch("gmf_via_transpose: reference has wrong length");

  const LinearOperator at = op.transposed();
  const Vector ab = op.apply(b);
  if (!(ab.norm() > 0.0)) throw InvalidArgument("gmf_via_transpose: A b vanishes");
  KrylovRun inner = krylov_approximate(method, f, at, ab, poles, k_max, std::nullopt, reorthogonalize);

  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(at.dense());
  KrylovRun out;
  out.basis = std::move(inner.basis);
  out.projected = std::move(inner.projected);
  out.stop = inner.stop;
  out.trace.orthogonality_drift = inner.trace.orthogonality_drift;
  for (std::size_t k = 0; k < inner.iterates.size(); ++k) {
    Vector y = cod.solve(inner.iterates[k]);
    if (reference) out.trace.error.push(int(k + 1), relative_error(y, *reference));
    out.iterates.push_back(std::move(y));
  }
  return out;
}

}  // namespace gmf
