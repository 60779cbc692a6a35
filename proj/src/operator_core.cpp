#include "gmf/operator_core.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "gmf/errors.hpp"

namespace gmf {

namespace {

void check_length(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    std::ostringstream msg;
    msg << what << ": expected vector of length " << expected << ", got " << actual;
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

LinearOperator::LinearOperator(Index rows, Index cols, Action apply, Action apply_transpose)
    : rows_(rows), cols_(cols), apply_(std::move(apply)), apply_transpose_(std::move(apply_transpose)) {
  if (rows <= 0 || cols <= 0) throw InvalidArgument("operator dimensions must be positive");
  if (!apply_ || !apply_transpose_) throw InvalidArgument("operator actions must be callable");
}

LinearOperator LinearOperator::from_dense(Matrix a) {
  auto payload = std::make_shared<const Matrix>(std::move(a));
  LinearOperator op(
      payload->rows(), payload->cols(),
      [payload](const VectorRef& v) -> Vector { return (*payload) * v; },
      [payload](const VectorRef& u) -> Vector { return payload->transpose() * u; });
  op.dense_ = std::move(payload);
  return op;
}

Vector LinearOperator::apply(const VectorRef& v) const {
  check_length(cols_, v.size(), "apply");
  Vector out = apply_(v);
  check_length(rows_, out.size(), "apply result");
  return out;
}

Vector LinearOperator::apply_transpose(const VectorRef& u) const {
  check_length(rows_, u.size(), "apply_transpose");
  Vector out = apply_transpose_(u);
  check_length(cols_, out.size(), "apply_transpose result");
  return out;
}

Vector LinearOperator::apply_gram(const VectorRef& v) const { return apply_transpose(apply(v)); }

LinearOperator LinearOperator::transposed() const {
  if (dense_) return from_dense(dense_->transpose());
  return LinearOperator(cols_, rows_, apply_transpose_, apply_);
}

const Matrix& LinearOperator::dense() const {
  if (!dense_) throw InvalidArgument("operator has no dense payload");
  return *dense_;
}

double estimate_norm(const LinearOperator& op, int iterations) {
  Vector v = gaussian_vector(op.cols(), 0x6e6f726dULL);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = op.apply_gram(v);
    const double nw = w.norm();
    if (nw == 0.0) break;
    estimate = std::sqrt(nw);
    v = w / nw;
  }
  return estimate;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Vector gaussian_vector(Index n, std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 engine(derive_seed(seed, stream));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(engine);
  return v;
}

// ---------------------------------------------------------------------------
// Shifted Gram solves

ShiftedGramSolver::ShiftedGramSolver(const LinearOperator& op) : op_(&op) {
  if (op.has_dense()) {
    const Matrix& a = op.dense();
    gram_ = a.transpose() * a;
  }
}

Vector ShiftedGramSolver::solve(double xi, const VectorRef& v) {
  if (!std::isfinite(xi)) throw InvalidArgument("shift must be finite");
  check_length(op_->cols(), v.size(), "solve_shifted_gram");
  if (!v.allFinite()) throw InvalidArgument("right-hand side is not finite");
  const double vnorm = v.norm();
  if (vnorm == 0.0) return Vector::Zero(v.size());

  if (gram_.size() == 0) return solve_iterative(xi, v);

  auto it = factorizations_.find(xi);
  if (it == factorizations_.end()) {
    Matrix shifted = gram_;
    shifted.diagonal().array() -= xi;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    if (!(lu.rcond() > rcond_threshold)) {
      std::ostringstream msg;
      msg << "shift " << xi << " makes A^T A - xi I (numerically) singular, rcond = " << lu.rcond();
      throw SolverFailure(msg.str());
    }
    it = factorizations_.emplace(xi, std::move(lu)).first;
  }
  const auto& lu = it->second;
  auto residual = [&](const Vector& x) -> Vector {
    Vector r = gram_ * x - xi * x;
    return r - v;
  };
  Vector x = lu.solve(v);
  Vector r = residual(x);
  // One step of iterative refinement before giving up.
  if (r.norm() > residual_tolerance * vnorm) {
    x -= lu.solve(r);
    r = residual(x);
  }
  if (!(r.norm() <= residual_tolerance * vnorm)) {
    std::ostringstream msg;
    msg << "shifted Gram solve residual " << r.norm() / vnorm << " exceeds tolerance";
    throw SolverFailure(msg.str());
  }
  return x;
}

Vector ShiftedGramSolver::solve_iterative(double xi, const VectorRef& v) const {
  // For xi <= 0 the shifted Gram matrix is positive semidefinite; for a pole
  // above the spectrum its negation is. Interior poles are rejected upstream.
  const double sign = xi <= 0.0 ? 1.0 : -1.0;
  auto op = [&](const Vector& x) -> Vector { return sign * (op_->apply_gram(x) - xi * x); };
  const Vector rhs = sign * v;
  const double bnorm = rhs.norm();
  const Index max_iter = 20 * op_->cols() + 100;

  Vector x = Vector::Zero(v.size());
  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  for (Index it = 0; it < max_iter && std::sqrt(rr) > 1e-13 * bnorm; ++it) {
    Vector ap = op(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) throw SolverFailure("conjugate gradients lost definiteness; shift inside spectrum?");
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  const double res = (op(x) - rhs).norm();
  if (!(res <= residual_tolerance * bnorm)) {
    std::ostringstream msg;
    msg << "conjugate gradients did not converge: relative residual " << res / bnorm;
    throw SolverFailure(msg.str());
  }
  return x;
}

Vector solve_shifted_gram(const LinearOperator& op, double xi, const VectorRef& v) {
  ShiftedGramSolver solver(op);
  return solver.solve(xi, v);
}

// ---------------------------------------------------------------------------
// Test matrices

Matrix haar_orthogonal(Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("haar_orthogonal: n must be >= 1");
  std::mt19937_64 engine(derive_seed(seed, 0x48414152ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(engine);

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

SingularProfile SingularProfile::from_values(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw InvalidArgument("singular values must be finite and nonnegative");
    if (i > 0 && values[i] > values[i - 1]) throw InvalidArgument("singular values must be descending");
  }
  SingularProfile p;
  p.kind = ProfileKind::explicit_list;
  if (!values.empty()) {
    p.hi = values.front();
    p.lo = values.back();
  }
  p.values = std::move(values);
  return p;
}

SingularProfile singular_profile(ProfileKind kind, Index count, double lo, double hi) {
  if (count < 1) throw InvalidArgument("singular_profile: count must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi)
    throw InvalidArgument("singular_profile: invalid interval");
  SingularProfile p;
  p.kind = kind;
  p.lo = lo;
  p.hi = hi;
  p.values.resize(static_cast<std::size_t>(count));
  switch (kind) {
    case ProfileKind::chebyshev2:
      for (Index j = 0; j < count; ++j) {
        const double x = count == 1 ? 1.0 : std::cos(std::numbers::pi * double(j) / double(count - 1));
        p.values[j] = lo + 0.5 * (hi - lo) * (x + 1.0);
      }
      p.values.front() = hi;
      if (count > 1) p.values.back() = lo;
      break;
    case ProfileKind::logspace: {
      if (lo <= 0.0) throw InvalidArgument("singular_profile: logspace needs lo > 0");
      const double llo = std::log10(lo);
      const double lhi = std::log10(hi);
      for (Index j = 0; j < count; ++j) {
        const double t = count == 1 ? 0.0 : double(j) / double(count - 1);
        p.values[j] = std::pow(10.0, lhi + t * (llo - lhi));
      }
      p.values.front() = hi;
      if (count > 1) p.values.back() = lo;
      break;
    }
    case ProfileKind::explicit_list:
      throw InvalidArgument("singular_profile: explicit lists are built with SingularProfile::from_values");
  }
  return p;
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "chebyshev2") return ProfileKind::chebyshev2;
  if (name == "logspace") return ProfileKind::logspace;
  if (name == "explicit") return ProfileKind::explicit_list;
  throw InvalidArgument("unknown singular profile kind '" + name + "'");
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::chebyshev2: return "chebyshev2";
    case ProfileKind::logspace: return "logspace";
    case ProfileKind::explicit_list: return "explicit";
  }
  return "unknown";
}

LinearOperator synthesize_test_matrix(Index m, Index n, const SingularProfile& profile,
                                      std::uint64_t seed) {
  const Index p = std::min(m, n);
  if (static_cast<Index>(profile.values.size()) != p) {
    std::ostringstream msg;
    msg << "profile has " << profile.values.size() << " values, expected min(m, n) = " << p;
    throw DimensionMismatch(msg.str());
  }
  const Matrix u = haar_orthogonal(m, derive_seed(seed, 1));
  const Matrix v = haar_orthogonal(n, derive_seed(seed, 2));
  Vector sigma(p);
  for (Index i = 0; i < p; ++i) sigma(i) = profile.values[static_cast<std::size_t>(i)];
  Matrix a = u.leftCols(p) * sigma.asDiagonal() * v.leftCols(p).transpose();
  return LinearOperator::from_dense(std::move(a));
}

// ---------------------------------------------------------------------------
// Text I/O

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open matrix file " + path.string());
  long long m = 0, n = 0;
  if (!(in >> m >> n) || m <= 0 || n <= 0) throw IoFailure("bad matrix header in " + path.string());
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      if (!(in >> a(i, j))) throw IoFailure("truncated matrix data in " + path.string());
  std::string extra;
  if (in >> extra) throw IoFailure("trailing data in matrix file " + path.string());
  return a;
}

void save_matrix(const Matrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write matrix file " + path.string());
  out << a.rows() << ' ' << a.cols() << '\n';
  out.precision(17);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
}

Vector load_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open vector file " + path.string());
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw IoFailure("bad number '" + token + "' in " + path.string());
    }
  }
  if (values.empty()) throw IoFailure("empty vector file " + path.string());
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace gmf
