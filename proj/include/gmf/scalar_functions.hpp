#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace gmf {

/**
 * Scalar function f on (0, inf), implicitly extended to an odd function.
 *
 * `zero_limit` records whether f(z)/z -> 0 as z -> 0, which is what allows
 * the companion g(z) = f(sqrt z)/sqrt z to be extended by g(0) = 0.
 * `analytic` is optional: the continuation of f to the right half-plane
 * (principal branches), needed by the ellipse-based bound constants.
 */
struct ScalarFunction {
  using RealEval = std::function<double(double)>;
  using ComplexEval = std::function<std::complex<double>(std::complex<double>)>;

  std::string name;
  RealEval eval;
  bool zero_limit = false;
  ComplexEval analytic;

  double operator()(double z) const { return eval(z); }
  bool has_analytic() const noexcept { return static_cast<bool>(analytic); }
};

/**
 * Built-in functions by name: sqrt, inv_quarter, sqrt_log, sinh, sin,
 * z_log_z, sqrt_log1p_sqrt, identity, and "odd_monomial:<degree>".
 */
ScalarFunction builtin(const std::string& name);

/// z^degree for an odd positive degree.
ScalarFunction odd_monomial(int degree);

/**
 * z^degree / prod_j (z^2 - xi_j) for finite poles xi_j; infinite poles
 * contribute no factor. The degree must be odd.
 */
ScalarFunction odd_rational(int degree, const std::vector<double>& poles);

/// Names accepted by builtin(), in display order.
std::vector<std::string> builtin_names();

/**
 * g(z) = f(sqrt z)/sqrt z. Evaluating g(0) returns 0 when f.zero_limit
 * holds and throws InvalidArgument otherwise.
 */
ScalarFunction companion_g(const ScalarFunction& f);

}  // namespace gmf
