#include <gtest/gtest.h>

#include <cmath>

#include "gmf/gmf_reference.hpp"
#include "gmf/golub_kahan.hpp"

using namespace gmf;

TEST(GolubKahan, FirstStepByHand) {
  Matrix a = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  const LinearOperator op = LinearOperator::from_dense(a);
  BidiagonalState s = gk_init(op, Vector::Ones(2), false);
  ASSERT_EQ(gk_step(s, op), GkStep::advanced);
  EXPECT_NEAR(s.alpha[0], std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(s.p[0](0), 3 / std::sqrt(10.0), 1e-14);
  EXPECT_NEAR(s.p[0](1), 1 / std::sqrt(10.0), 1e-14);
  EXPECT_NEAR(s.beta[0], std::sqrt(3.2), 1e-14);
  EXPECT_NEAR(s.q_next(0), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s.q_next(1), -1 / std::sqrt(2.0), 1e-14);
}

TEST(GolubKahan, IdentityBreaksDownAfterOneStep) {
  const LinearOperator op = LinearOperator::from_dense(Matrix::Identity(3, 3));
  BidiagonalState s = gk_init(op, Vector::Ones(3), false);
  EXPECT_EQ(gk_step(s, op), GkStep::last_column);
  EXPECT_TRUE(s.exhausted);
  const KrylovRun run = gk_approximate(builtin("sqrt"), op, Vector::Ones(3), 5, false);
  EXPECT_EQ(run.steps(), 1);
  EXPECT_EQ(run.stop, StopReason::invariant_subspace);
  EXPECT_LT((run.iterates[0] - Vector::Ones(3)).norm(), 1e-14);
}

TEST(GolubKahan, OddPolynomialIsExactAtMatchingDegree) {
  const LinearOperator op = synthesize_test_matrix(8, 6, singular_profile(ProfileKind::chebyshev2, 6, 0.5, 2.0), 1);
  const Vector b = gaussian_vector(6, 1, 1);
  const ScalarFunction f = odd_monomial(5);
  const Vector ref = gmf_apply_reference(f, op.dense(), b);
  const KrylovRun run = gk_approximate(f, op, b, 3, false, ref);
  EXPECT_LT(run.trace.error.value.back(), 1e-12);
  EXPECT_GT(run.trace.error.value.front(), 1e-6);
}

TEST(GolubKahan, ReorthogonalizationKeepsBasesOrthonormal) {
  const LinearOperator op = synthesize_test_matrix(80, 60, singular_profile(ProfileKind::logspace, 60, 1e-3, 10.0), 2);
  const Vector b = gaussian_vector(60, 2, 1);
  BidiagonalState s = gk_init(op, b, true);
  for (int j = 0; j < 50; ++j) gk_step(s, op);
  const Matrix p = s.p_basis();
  const Matrix q = s.q_basis();
  EXPECT_LT((p.transpose() * p - Matrix::Identity(p.cols(), p.cols())).norm(), 1e-12);
  EXPECT_LT((q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm(), 1e-12);
  EXPECT_LT((p.transpose() * op.dense() * q - s.bidiagonal()).norm(), 1e-11);
}
