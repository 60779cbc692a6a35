#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gmf {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

/**
 * Matrix-free view of a real m x n matrix A.
 *
 * Holds the forward action v -> A v and the transposed action u -> A^T u.
 * Operators built from a dense matrix keep the matrix as a shared,
 * immutable payload so that dense fast paths (Gram factorizations,
 * least-squares solves) can use it.
 */
class LinearOperator {
 public:
  using Action = std::function<Vector(const VectorRef&)>;

  LinearOperator(Index rows, Index cols, Action apply, Action apply_transpose);

  static LinearOperator from_dense(Matrix a);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  /// A v; throws DimensionMismatch unless v has cols() entries.
  Vector apply(const VectorRef& v) const;
  /// A^T u; throws DimensionMismatch unless u has rows() entries.
  Vector apply_transpose(const VectorRef& u) const;
  /// A^T A v.
  Vector apply_gram(const VectorRef& v) const;

  /// Operator representing A^T, sharing the payload.
  LinearOperator transposed() const;

  bool has_dense() const noexcept { return static_cast<bool>(dense_); }
  /// Dense payload; throws InvalidArgument when the operator is matrix-free.
  const Matrix& dense() const;

 private:
  Index rows_;
  Index cols_;
  Action apply_;
  Action apply_transpose_;
  std::shared_ptr<const Matrix> dense_;
};

/// Power-iteration estimate of ||A||_2 with a fixed deterministic start.
double estimate_norm(const LinearOperator& op, int iterations = 30);

/// Deterministic 64-bit stream seed derived from an experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Standard-normal vector drawn from the given stream of `seed`.
Vector gaussian_vector(Index n, std::uint64_t seed, std::uint64_t stream = 0);

/**
 * Solves (A^T A - xi I) x = v.
 *
 * Uses a dense LU factorization when the operator carries a dense payload,
 * conjugate gradients on +-(A^T A - xi I) otherwise. Every result is
 * residual-checked against 1e-10 ||v||. A shift of exactly zero solves the
 * plain Gram system.
 */
Vector solve_shifted_gram(const LinearOperator& op, double xi, const VectorRef& v);

/**
 * Shifted Gram solver that caches one factorization per distinct shift.
 * Single-owner; intended to live for the duration of one Krylov run.
 */
class ShiftedGramSolver {
 public:
  explicit ShiftedGramSolver(const LinearOperator& op);

  Vector solve(double xi, const VectorRef& v);

  static constexpr double residual_tolerance = 1e-10;
  static constexpr double rcond_threshold = 1e-15;

 private:
  Vector solve_iterative(double xi, const VectorRef& v) const;

  const LinearOperator* op_;
  Matrix gram_;
  std::map<double, Eigen::PartialPivLU<Matrix>> factorizations_;
};

/// Haar-distributed n x n orthogonal matrix: QR of a Gaussian matrix with diag(R) >= 0.
Matrix haar_orthogonal(Index n, std::uint64_t seed);

enum class ProfileKind { chebyshev2, logspace, explicit_list };

struct SingularProfile {
  std::vector<double> values;  // descending, finite, >= 0
  ProfileKind kind = ProfileKind::explicit_list;
  double lo = 0.0;
  double hi = 0.0;

  static SingularProfile from_values(std::vector<double> values);
};

/**
 * chebyshev2 maps cos(j pi / (count - 1)), j = 0..count-1, affinely onto
 * [lo, hi]; logspace is geometric between hi and lo. Both are descending.
 */
SingularProfile singular_profile(ProfileKind kind, Index count, double lo, double hi);

ProfileKind parse_profile_kind(const std::string& name);
std::string to_string(ProfileKind kind);

/// A = U diag(profile) V^T with independent Haar factors drawn from `seed`.
LinearOperator synthesize_test_matrix(Index m, Index n, const SingularProfile& profile,
                                      std::uint64_t seed);

/// Text matrix format: "m n" on the first line, then m rows of n numbers.
Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const Matrix& a, const std::filesystem::path& path);

/// Whitespace-separated list of numbers.
Vector load_vector(const std::filesystem::path& path);

}  // namespace gmf
