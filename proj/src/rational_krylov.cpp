#include "gmf/rational_krylov.hpp"

#include <cmath>

#include "gmf/errors.hpp"
#include "gmf/gmf_reference.hpp"

namespace gmf {

namespace {

constexpr double breakdown_tolerance = 1e-12;

}  // namespace

RationalArnoldiFactorization rational_arnoldi(const LinearOperator& op, const VectorRef& b,
                                              const PoleSequence& poles, int k) {
  if (k < 1) throw InvalidArgument("rational_arnoldi: k must be >= 1");
  if (b.size() != op.cols()) throw DimensionMismatch("rational_arnoldi: b has wrong length");
  const double bnorm = b.norm();
  if (!(bnorm > 0.0)) throw InvalidArgument("rational_arnoldi: b must be nonzero");

  const Index n = op.cols();
  ShiftedGramSolver solver(op);
  Matrix q(n, k);
  Matrix h = Matrix::Zero(k, k);
  Matrix kk = Matrix::Zero(k, k);
  q.col(0) = b / bnorm;

  RationalArnoldiFactorization out;
  Index cols = 1;
  for (Index j = 0; j + 1 < k; ++j) {
    const double xi = poles.at(std::size_t(j + 1));
    Vector w;
    if (is_infinite(xi)) {
      w = op.apply_gram(q.col(j));
    } else if (xi == 0.0) {
      w = solver.solve(0.0, q.col(j));
    } else {
      w = -xi * solver.solve(xi, op.apply_gram(q.col(j)));
    }
    const double wnorm = w.norm();
    Vector coeff = Vector::Zero(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i <= j; ++i) {
        const double c = q.col(i).dot(w);
        w -= c * q.col(i);
        coeff(i) += c;
      }
    }
    const double next = w.norm();
    out.poles_used.push_back(xi);
    if (next <= breakdown_tolerance * wnorm) {
      // Lucky breakdown: the continuation stays in the current space.
      out.invariant = true;
      out.poles_used.pop_back();
      break;
    }
    coeff(j + 1) = next;
    q.col(j + 1) = w / next;

    if (is_infinite(xi)) {
      h.col(j) = coeff;
      kk(j, j) = 1.0;
    } else if (xi == 0.0) {
      kk.col(j) = coeff;
      h(j, j) = 1.0;
    } else {
      h.col(j) = coeff;
      kk.col(j) = coeff / xi;
      kk(j, j) += 1.0;
    }
    ++cols;
  }

  // `cols` basis vectors and cols-1 pencil columns were produced.
  out.q = q.leftCols(cols);
  const Index pencil_cols = cols - 1;
  out.h = h.topLeftCorner(cols, pencil_cols);
  out.k = kk.topLeftCorner(cols, pencil_cols);
  return out;
}

GmfProjection project(const LinearOperator& op, const MatrixRef& q) {
  if (q.rows() != op.cols()) throw DimensionMismatch("project: basis has wrong row count");
  const Index k = q.cols();
  Matrix aq(op.rows(), k);
  for (Index j = 0; j < k; ++j) aq.col(j) = op.apply(q.col(j));
  if (k > op.rows()) throw InvalidArgument("project: more basis vectors than rows of A");

  Eigen::HouseholderQR<Matrix> qr(aq);
  GmfProjection out;
  out.p = qr.householderQ() * Matrix::Identity(op.rows(), k);
  out.b = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index i = 0; i < k; ++i) {
    if (out.b(i, i) < 0.0) {
      out.b.row(i) = -out.b.row(i);
      out.p.col(i) = -out.p.col(i);
    }
  }
  const double scale = aq.norm();
  for (Index i = 0; i < k; ++i)
    if (out.b(i, i) <= 1e-14 * scale) out.rank_deficient = true;
  return out;
}

KrylovRun rational_gmf_approximate(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b,
                                   const PoleSequence& poles, int k_max, const std::optional<Vector>& reference) {
  if (k_max < 1) throw InvalidArgument("rational_gmf_approximate: k_max must be >= 1");
  if (reference && reference->size() != op.rows())
    throw DimensionMismatch("rational_gmf_approximate: reference has wrong length");
  const int k_cap = static_cast<int>(std::min<Index>(k_max, std::min(op.rows(), op.cols())));
  const RationalArnoldiFactorization fact = rational_arnoldi(op, b, poles, k_cap);
  const GmfProjection proj = project(op, fact.q);
  const double bnorm = b.norm();

  KrylovRun run;
  const Index dim = fact.dimension();
  for (Index k = 1; k <= dim; ++k) {
    Vector y = proj.p.leftCols(k) * gmf_first_column(f, proj.b.topLeftCorner(k, k), bnorm);
    if (reference) run.trace.error.push(int(k), relative_error(y, *reference));
    run.iterates.push_back(std::move(y));
  }
  run.basis = proj.p;
  run.projected = proj.b;
  run.stop = dim < k_max ? StopReason::invariant_subspace : StopReason::reached_k_max;
  return run;
}

}  // namespace gmf
