#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gmf/operator_core.hpp"
#include "gmf/poles.hpp"
#include "gmf/scalar_functions.hpp"
#include "gmf/trace.hpp"

namespace gmf {

/**
 * Upper triangular B_k whose strictly upper part is generated by its first
 * two superdiagonals.
 *
 * Column j (j >= 3) above row j-2 is (gamma_{j-2} / beta_{j-2}) times column
 * j-1 above row j-2, so entry (i, j), j > i + 1, equals
 * beta_i * prod_{t=i+1}^{j-1} gamma_{t-1} / beta_{t-1}.
 * Columns built by the small-beta fallback are stored explicitly and break
 * the recursion at that column only.
 */
struct QuasiseparableUpper {
  std::vector<double> d;      // B(i, i),     i = 1..k
  std::vector<double> beta;   // B(i, i + 1), i = 1..k-1
  std::vector<double> gamma;  // B(i, i + 2), i = 1..k-2
  std::map<int, Vector> explicit_columns;  // 1-based column j -> B(1:j-1, j)

  int k() const noexcept { return static_cast<int>(d.size()); }
  bool consistent() const noexcept;
  Matrix reconstruct_dense() const;

  /// u, v with triu(B, 1) = triu(u v^T, 1); v_1 = v_2 = 1.
  struct Generators {
    Vector u;
    Vector v;
  };
  /// Throws InvalidArgument when a beta used as divisor vanished or a column is explicit.
  Generators generators() const;
};

Matrix reconstruct_dense(const QuasiseparableUpper& b);

struct RgkStepResult {
  Vector p;           // p_k
  double d = 0.0;     // d_k
  double beta = 0.0;  // beta_{k-1} (0 for k = 1)
  double gamma = 0.0; // gamma_{k-2} (0 for k <= 2)
  Vector x;           // x_k = [P_{k-1} 0] B_k e_k
};

/**
 * k-th step of the short-recurrence rational Golub-Kahan process.
 *
 * Empty p_prev1 means k = 1, empty p_prev2 means k = 2. beta_prev is
 * beta_{k-2} and must be nonzero when p_prev2 is given. When d_k is zero
 * the returned p is left empty.
 */
RgkStepResult rgk_step(const LinearOperator& op, const VectorRef& q, const Vector& p_prev1, const Vector& p_prev2,
                       const Vector& x_prev, double beta_prev);

/**
 * Short-recurrence rational Lanczos on M = A^T A producing the orthonormal
 * basis of Q_k(M, b) one vector at a time.
 *
 * With R = (xi I - M)^{-1} (R = M for xi = inf) the next vector is the part
 * of R q_j - c R q_{j-1} orthogonal to q_j, q_{j-1}, q_{j-2}, where c makes
 * it orthogonal to q_{j-2}. This spans the same space as rational Arnoldi
 * and the sign of each vector matches it.
 */
class RationalLanczos {
 public:
  RationalLanczos(const LinearOperator& op, const VectorRef& b, PoleSequence poles);

  const Vector& current() const noexcept { return q_[0]; }
  int dimension() const noexcept { return dim_; }
  bool exhausted() const noexcept { return exhausted_; }

  /// Appends q_{j+1} using pole xi_j. Returns false (and stops) on breakdown.
  bool advance();

  static constexpr double breakdown_tolerance = 1e-12;

 private:
  Vector resolvent(double xi, const VectorRef& v);

  const LinearOperator* op_;
  PoleSequence poles_;
  ShiftedGramSolver solver_;
  Vector q_[3];  // q_j, q_{j-1}, q_{j-2}
  int dim_ = 1;
  bool exhausted_ = false;
};

struct RgkOptions {
  bool track_orthogonality = true;
  bool keep_q = false;              // store Q_k for diagnostics
  double fallback_factor = 1e-13;   // |beta_{k-2}| <= factor ||A||_est triggers the explicit column
};

struct RgkResult {
  KrylovRun run;
  QuasiseparableUpper b;
  Matrix q;  // only with keep_q
  int fallback_steps = 0;
};

/**
 * y_k = ||b|| P_k f^(B_k) e_1 for k = 1..k_max using the short recurrence
 * on both sides. P columns are appended to an output buffer for the
 * approximation and never reorthogonalized; the trace records
 * ||I - P_k^T P_k||_2 per step.
 */
RgkResult rgk_run(const ScalarFunction& f, const LinearOperator& op, const VectorRef& b, const PoleSequence& poles,
                  int k_max, const std::optional<Vector>& reference = std::nullopt, const RgkOptions& options = {});

}  // namespace gmf
