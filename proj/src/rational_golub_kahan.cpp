#include "gmf/rational_golub_kahan.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gmf/errors.hpp"
#include "gmf/gmf_reference.hpp"

namespace gmf {

bool QuasiseparableUpper::consistent() const noexcept {
  const std::size_t n = d.size();
  if (n == 0) return beta.empty() && gamma.empty();
  if (beta.size() != n - 1) return false;
  if (gamma.size() != (n >= 2 ? n - 2 : 0)) return false;
  for (const auto& [j, col] : explicit_columns)
    if (j < 3 || j > int(n) || col.size() != j - 1) return false;
  return true;
}

Matrix QuasiseparableUpper::reconstruct_dense() const {
  if (!consistent()) throw InvalidArgument("reconstruct_dense: inconsistent generator lengths");
  const Index n = k();
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    out(j, j) = d[std::size_t(j)];
    if (j == 0) continue;
    if (auto it = explicit_columns.find(int(j + 1)); it != explicit_columns.end()) {
      out.col(j).head(j) = it->second;
      continue;
    }
    out(j - 1, j) = beta[std::size_t(j - 1)];
    if (j >= 2) {
      const double den = beta[std::size_t(j - 2)];
      if (den == 0.0) throw InvalidArgument("reconstruct_dense: vanished beta without an explicit column");
      out.col(j).head(j - 1) = (gamma[std::size_t(j - 2)] / den) * out.col(j - 1).head(j - 1);
    }
  }
  return out;
}

QuasiseparableUpper::Generators QuasiseparableUpper::generators() const {
  if (!consistent()) throw InvalidArgument("generators: inconsistent generator lengths");
  if (!explicit_columns.empty()) throw InvalidArgument("generators: explicit columns break the recursion");
  const Index n = k();
  Generators g{Vector::Zero(n), Vector::Ones(n)};
  for (Index j = 2; j < n; ++j) {
    const double den = beta[std::size_t(j - 2)];
    if (den == 0.0) throw InvalidArgument("generators: vanished beta");
    g.v(j) = g.v(j - 1) * gamma[std::size_t(j - 2)] / den;
  }
  for (Index i = 0; i + 1 < n; ++i) {
    if (g.v(i + 1) == 0.0) throw InvalidArgument("generators: vanished gamma");
    g.u(i) = beta[std::size_t(i)] / g.v(i + 1);
  }
  return g;
}

Matrix reconstruct_dense(const QuasiseparableUpper& b) { return b.reconstruct_dense(); }

RgkStepResult rgk_step(const LinearOperator& op, const VectorRef& q, const Vector& p_prev1, const Vector& p_prev2,
                       const Vector& x_prev, double beta_prev) {
  RgkStepResult out;
  Vector w = op.apply(q);
  if (p_prev1.size() == 0) {
    out.x = Vector::Zero(w.size());
  } else {
    out.beta = w.dot(p_prev1);
    if (p_prev2.size() == 0) {
      out.x = out.beta * p_prev1;
    } else {
      if (beta_prev == 0.0) throw InvalidArgument("rgk_step: beta_{k-2} vanished");
      out.gamma = w.dot(p_prev2);
      out.x = (out.gamma / beta_prev) * x_prev + out.beta * p_prev1;
    }
    w -= out.x;
  }
  out.d = w.norm();
  if (out.d > 0.0) out.p = w / out.d;
  return out;
}

RationalLanczos::RationalLanczos(const LinearOperator& op, const VectorRef& b, PoleSequence poles)
    : op_(&op), poles_(std::move(poles)), solver_(op) {
  if (b.size() != op.cols()) throw DimensionMismatch("RationalLanczos: b has wrong length");
  const double bnorm = b.norm();
  if (!(bnorm > 0.0)) throw InvalidArgument("RationalLanczos: b must be nonzero");
  if (poles_.poles.empty()) throw InvalidArgument("RationalLanczos: empty pole sequence");
  q_[0] = b / bnorm;
}

Vector RationalLanczos::resolvent(double xi, const VectorRef& v) {
  if (is_infinite(xi)) return op_->apply_gram(v);
  return -solver_.solve(xi, v);
}

bool RationalLanczos::advance() {
  if (exhausted_) return false;
  const double xi = poles_.at(std::size_t(dim_));
  const Vector u = resolvent(xi, q_[0]);
  Vector y = u;
  if (dim_ >= 3) {
    const Vector u_prev = resolvent(xi, q_[1]);
    const double den = q_[2].dot(u_prev);
    if (std::abs(den) > 1e-14 * u_prev.norm()) y -= (q_[2].dot(u) / den) * u_prev;
  }
  const int depth = std::min(dim_, 3);
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i < depth; ++i) y -= q_[i].dot(y) * q_[i];

  const double ynorm = y.norm();
  if (ynorm <= breakdown_tolerance * u.norm()) {
    exhausted_ = true;
    return false;
  }
  y /= ynorm;
  // Arnoldi's continuation is u for finite nonzero and infinite poles, -u for a zero pole.
  const double orient = y.dot(u) * (xi == 0.0 ? -1.0 : 1.0);
  if (orient < 0.0) y = -y;
  q_[2] = std::move(q_[1]);
  q_[1] = std::move(q_[0]);
  q_[0] = std::move(y);
  ++dim_;
  return true;
}

namespace {

double orthogonality_loss(const Matrix& gram) {
  const Matrix defect = Matrix::Identity(gram.rows(), gram.cols()) - gram;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(defect, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

RgkResult rgk_run(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b, const PoleSequence& poles,
                  int k_max, const std::optional<Vector>& reference, const RgkOptions& options) {
  if (k_max < 1) throw InvalidArgument("rgk_run: k_max must be >= 1");
  if (reference && reference->size() != op.rows()) throw DimensionMismatch("rgk_run: reference has wrong length");
  const int k_cap = static_cast<int>(std::min<Index>(k_max, std::min(op.rows(), op.cols())));
  const double norm_a = estimate_norm(op);
  const double breakdown = 1e-14 * norm_a;
  const double fallback = options.fallback_factor * norm_a;
  const double bnorm = b.norm();

  RationalLanczos lanczos(op, b, poles);
  const Index m = op.rows();
  Matrix p_store(m, k_cap);
  Matrix dense = Matrix::Zero(k_cap, k_cap);
  Matrix gram = Matrix::Zero(k_cap, k_cap);
  Matrix q_store;
  if (options.keep_q) q_store.resize(op.cols(), k_cap);

  RgkResult out;
  Vector p1, p2, x;
  double beta_prev = 0.0;
  int k = 0;
  while (k < k_cap) {
    const int j = k + 1;  // column being built
    const Vector& q = lanczos.current();
    RgkStepResult step;
    if (j >= 3 && std::abs(beta_prev) <= fallback) {
      // Explicit column against the stored P, for this step only.
      Vector w = op.apply(q);
      const Vector c = p_store.leftCols(k).transpose() * w;
      step.x = p_store.leftCols(k) * c;
      w -= step.x;
      step.beta = c(k - 1);
      step.gamma = c(k - 2);
      step.d = w.norm();
      if (step.d > 0.0) step.p = w / step.d;
      out.b.explicit_columns[j] = c;
      ++out.fallback_steps;
    } else {
      step = rgk_step(op, q, p1, p2, x, beta_prev);
    }
    if (step.d <= breakdown) {
      out.b.explicit_columns.erase(j);
      out.run.stop = StopReason::invariant_subspace;
      break;
    }

    p_store.col(k) = step.p;
    if (options.keep_q) q_store.col(k) = q;
    dense(k, k) = step.d;
    out.b.d.push_back(step.d);
    if (j >= 2) {
      out.b.beta.push_back(step.beta);
      if (auto it = out.b.explicit_columns.find(j); it != out.b.explicit_columns.end()) {
        dense.col(k).head(k) = it->second;
      } else {
        dense(k - 1, k) = step.beta;
        if (j >= 3) dense.col(k).head(k - 1) = (step.gamma / beta_prev) * dense.col(k - 1).head(k - 1);
      }
    }
    if (j >= 3) out.b.gamma.push_back(step.gamma);
    ++k;

    Vector y = p_store.leftCols(k) * gmf_first_column(f, dense.topLeftCorner(k, k), bnorm);
    if (reference) out.run.trace.error.push(k, relative_error(y, *reference));
    out.run.iterates.push_back(std::move(y));
    if (options.track_orthogonality) {
      const Vector row = p_store.leftCols(k).transpose() * p_store.col(k - 1);
      gram.row(k - 1).head(k) = row.transpose();
      gram.col(k - 1).head(k) = row;
      out.run.trace.orthogonality_drift.push(k, orthogonality_loss(gram.topLeftCorner(k, k)));
    }

    beta_prev = j >= 2 ? step.beta : 0.0;
    p2 = std::move(p1);
    p1 = std::move(step.p);
    x = std::move(step.x);
    if (k == k_cap) break;
    if (!lanczos.advance()) {
      out.run.stop = StopReason::invariant_subspace;
      break;
    }
  }
  if (k == k_max) out.run.stop = StopReason::reached_k_max;
  else if (out.run.stop != StopReason::invariant_subspace) out.run.stop = StopReason::invariant_subspace;

  out.run.basis = p_store.leftCols(k);
  out.run.projected = dense.topLeftCorner(k, k);
  if (options.keep_q) out.q = q_store.leftCols(k);
  return out;
}

}  // namespace gmf
