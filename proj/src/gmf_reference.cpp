#include "gmf/gmf_reference.hpp"

#include <cmath>
#include <sstream>

#include "gmf/errors.hpp"

namespace gmf {

namespace {

double evaluate_checked(const ScalarFunction& f, double z) {
  const double value = f(z);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "function " << f.name << " is not finite at singular value " << z;
    throw InvalidArgument(msg.str());
  }
  return value;
}

double relative_difference(const Matrix& x, const Matrix& ref) {
  const double scale = ref.norm();
  const double diff = (x - ref).norm();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

CompactSvd compact_svd(const MatrixRef& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = rank_truncation * s(0);
    while (rank < s.size() && s(rank) > cutoff) ++rank;
  }
  return CompactSvd{svd.matrixU().leftCols(rank), s.head(rank), svd.matrixV().leftCols(rank)};
}

Matrix gmf_dense(const ScalarFunction& f, const MatrixRef& a) {
  const CompactSvd svd = compact_svd(a);
  Vector fs(svd.rank());
  for (Index i = 0; i < svd.rank(); ++i) fs(i) = evaluate_checked(f, svd.sigma(i));
  return svd.u * fs.asDiagonal() * svd.v.transpose();
}

Matrix gmf_symmetric(const ScalarFunction& g, const MatrixRef& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const Vector& lambda = eig.eigenvalues();
  const double lmax = lambda.cwiseAbs().maxCoeff();
  // Eigenvalues of a Gram matrix carry absolute noise ~ eps * lambda_max.
  const double cutoff = std::max(rank_truncation * rank_truncation * lmax,
                                 double(s.rows()) * std::numeric_limits<double>::epsilon() * lmax);
  Vector gl = Vector::Zero(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > cutoff) gl(i) = evaluate_checked(g, lambda(i));
  return eig.eigenvectors() * gl.asDiagonal() * eig.eigenvectors().transpose();
}

Vector gmf_apply_reference(const ScalarFunction& f, const MatrixRef& a, const VectorRef& b) {
  if (b.size() != a.cols()) throw DimensionMismatch("gmf_apply_reference: b has wrong length");
  const CompactSvd svd = compact_svd(a);
  Vector coeff = svd.v.transpose() * b;
  for (Index i = 0; i < svd.rank(); ++i) coeff(i) *= evaluate_checked(f, svd.sigma(i));
  return svd.u * coeff;
}

Vector gmf_first_column(const ScalarFunction& f, const MatrixRef& b, double scale) {
  const CompactSvd svd = compact_svd(b);
  Vector coeff = svd.v.row(0).transpose();
  for (Index i = 0; i < svd.rank(); ++i) coeff(i) *= scale * evaluate_checked(f, svd.sigma(i));
  return svd.u * coeff;
}

bool IdentityReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::vector<std::string> IdentityReport::violated() const {
  std::vector<std::string> names;
  for (const auto& c : checks)
    if (!c.passed) names.push_back(c.name);
  return names;
}

IdentityReport check_identities(const ScalarFunction& f, const MatrixRef& a, double tolerance) {
  IdentityReport report;
  auto record = [&](std::string name, double err) {
    report.checks.push_back({std::move(name), err, err <= tolerance});
  };

  const Matrix at = a.transpose();
  const Matrix aat = a * at;
  const Matrix ata = at * a;

  // Odd polynomial p(z) = q(z^2) z with q(t) = 1 + t/2 - t^2/5; q evaluated by Horner.
  {
    const std::vector<double> q = {1.0, 0.5, -0.2};
    auto q_of = [&](const Matrix& s) {
      Matrix acc = q.back() * Matrix::Identity(s.rows(), s.cols());
      for (int i = int(q.size()) - 2; i >= 0; --i) {
        acc = acc * s;
        acc.diagonal().array() += q[std::size_t(i)];
      }
      return acc;
    };
    ScalarFunction p{"odd_poly", [q](double z) {
                       const double t = z * z;
                       return (q[0] + t * (q[1] + t * q[2])) * z;
                     },
                     false, {}};
    const Matrix pa = gmf_dense(p, a);
    record("odd_polynomial_left", relative_difference(q_of(aat) * a, pa));
    record("odd_polynomial_right", relative_difference(a * q_of(ata), pa));
  }

  const Matrix fa = gmf_dense(f, a);
  const ScalarFunction g = companion_g(f);
  record("companion_gmf", relative_difference(a * gmf_symmetric(g, ata), fa));
  if (f.zero_limit) {
    // g(0) = 0 is defined, so the ordinary spectral function applies to every eigenvalue.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(ata);
    Vector gl(eig.eigenvalues().size());
    for (Index i = 0; i < gl.size(); ++i) gl(i) = g(std::max(eig.eigenvalues()(i), 0.0));
    const Matrix g_ata = eig.eigenvectors() * gl.asDiagonal() * eig.eigenvectors().transpose();
    record("companion_function", relative_difference(a * g_ata, fa));
  }

  const Matrix fat = gmf_dense(f, at);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Matrix pinv = cod.pseudoInverse();
  record("transpose_link", relative_difference(pinv.transpose() * fat * a, fa));
  record("transpose_commute", relative_difference(fat * a, at * fa));
  return report;
}

}  // namespace gmf
