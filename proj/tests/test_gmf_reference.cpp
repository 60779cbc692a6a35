#include <gtest/gtest.h>

#include "gmf/gmf_reference.hpp"

using namespace gmf;

TEST(GmfReference, SqrtOfDiagonal) {
  Matrix a = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Matrix fa = gmf_dense(builtin("sqrt"), a);
  EXPECT_NEAR(fa(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(fa(1, 1), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(fa(0, 1)) + std::abs(fa(1, 0)), 0.0, 1e-15);
}

TEST(GmfReference, CubeApplied) {
  Matrix a = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  const Vector y = gmf_apply_reference(odd_monomial(3), a, Vector::Ones(2));
  EXPECT_NEAR(y(0), 8.0, 1e-13);
  EXPECT_NEAR(y(1), 27.0, 1e-13);
}

TEST(GmfReference, CubeEqualsAAtA) {
  const Matrix a = synthesize_test_matrix(6, 4, singular_profile(ProfileKind::chebyshev2, 4, 0.3, 2.0), 11).dense();
  EXPECT_LT((gmf_dense(odd_monomial(3), a) - a * a.transpose() * a).norm(), 1e-12);
}

TEST(GmfReference, RankDeficientKeepsOnlyNonzeroTriplets) {
  Matrix a(1, 2);
  a << 1.0, 0.0;
  const CompactSvd svd = compact_svd(a);
  EXPECT_EQ(svd.rank(), 1);
  const Matrix fa = gmf_dense(builtin("sqrt"), a);
  EXPECT_NEAR(fa(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(fa(0, 1), 0.0, 1e-15);
}

TEST(GmfReference, IdentitiesHold) {
  const ScalarFunction f = builtin("sqrt");
  EXPECT_TRUE(check_identities(f, Matrix::Identity(3, 3)).all_passed());
  Matrix wide(1, 2);
  wide << 1.0, 0.0;
  EXPECT_TRUE(check_identities(f, wide).all_passed());
  const Matrix a = synthesize_test_matrix(6, 4, singular_profile(ProfileKind::logspace, 4, 0.1, 5.0), 11).dense();
  const IdentityReport report = check_identities(f, a);
  EXPECT_TRUE(report.all_passed());
  EXPECT_TRUE(report.violated().empty());
}

TEST(GmfReference, FirstColumnOfProjectedMatrix) {
  Matrix b = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Vector y = gmf_first_column(builtin("sqrt"), b, 3.0);
  EXPECT_NEAR(y(0), 6.0, 1e-14);
  EXPECT_NEAR(y(1), 0.0, 1e-14);
}
