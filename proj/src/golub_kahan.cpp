#include "gmf/golub_kahan.hpp"

#include "gmf/errors.hpp"
#include "gmf/gmf_reference.hpp"

namespace gmf {

namespace {

Matrix stack_columns(const std::vector<Vector>& cols, Index rows) {
  Matrix out(rows, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return out;
}

void orthogonalize_against(Vector& v, const std::vector<Vector>& basis) {
  for (const auto& u : basis) v -= u.dot(v) * u;
}

}  // namespace

Matrix BidiagonalState::bidiagonal() const {
  const Index n = k();
  Matrix b = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    b(i, i) = alpha[std::size_t(i)];
    if (i + 1 < n) b(i, i + 1) = beta[std::size_t(i)];
  }
  return b;
}

Matrix BidiagonalState::p_basis() const { return stack_columns(p, p.empty() ? 0 : p.front().size()); }

Matrix BidiagonalState::q_basis() const { return stack_columns(q, q.empty() ? 0 : q.front().size()); }

BidiagonalState gk_init(const LinearOperator& op, const VectorRef& b, bool reorthogonalize) {
  if (b.size() != op.cols()) throw DimensionMismatch("gk_init: b has wrong length");
  const double bnorm = b.norm();
  if (!(bnorm > 0.0)) throw InvalidArgument("gk_init: b must be nonzero");
  BidiagonalState state;
  state.reorthogonalize = reorthogonalize;
  state.tolerance = 1e-14 * estimate_norm(op);
  state.q_next = b / bnorm;
  return state;
}

GkStep gk_step(BidiagonalState& state, const LinearOperator& op) {
  if (state.exhausted || state.q_next.size() == 0) {
    state.exhausted = true;
    return GkStep::invariant;
  }
  const Vector qk = state.q_next;
  Vector r = op.apply(qk);
  if (!state.p.empty()) r -= state.beta.back() * state.p.back();
  if (state.reorthogonalize) orthogonalize_against(r, state.p);
  const double alpha = r.norm();
  if (alpha <= state.tolerance) {
    state.exhausted = true;
    state.q_next.resize(0);
    return GkStep::invariant;
  }
  Vector pk = r / alpha;
  if (state.reorthogonalize) state.q.push_back(qk);
  state.alpha.push_back(alpha);

  Vector s = op.apply_transpose(pk) - alpha * qk;
  state.p.push_back(std::move(pk));
  if (state.reorthogonalize) orthogonalize_against(s, state.q);
  const double beta = s.norm();
  if (beta <= state.tolerance) {
    state.exhausted = true;
    state.q_next.resize(0);
    return GkStep::last_column;
  }
  state.beta.push_back(beta);
  state.q_next = s / beta;
  return GkStep::advanced;
}

KrylovRun gk_approximate(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b, int k_max,
                         bool reorthogonalize, const std::optional<Vector>& reference) {
  if (k_max < 1) throw InvalidArgument("gk_approximate: k_max must be >= 1");
  if (reference && reference->size() != op.rows()) throw DimensionMismatch("gk_approximate: reference has wrong length");
  BidiagonalState state = gk_init(op, b, reorthogonalize);
  const double bnorm = b.norm();
  KrylovRun run;
  for (int k = 1; k <= k_max; ++k) {
    const GkStep status = gk_step(state, op);
    if (status == GkStep::invariant) {
      run.stop = StopReason::invariant_subspace;
      break;
    }
    const Matrix bk = state.bidiagonal();
    const Matrix pk = state.p_basis();
    Vector y = pk * gmf_first_column(f, bk, bnorm);
    if (reference) run.trace.error.push(k, relative_error(y, *reference));
    run.iterates.push_back(std::move(y));
    if (status == GkStep::last_column) {
      run.stop = StopReason::invariant_subspace;
      break;
    }
  }
  run.basis = state.p_basis();
  run.projected = state.bidiagonal();
  return run;
}

}  // namespace gmf
