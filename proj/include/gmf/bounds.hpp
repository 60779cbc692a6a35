#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "gmf/poles.hpp"
#include "gmf/scalar_functions.hpp"
#include "gmf/trace.hpp"

namespace gmf {

using Complex = std::complex<double>;

/**
 * Samples of the ellipse with foci a^2, b^2 obtained by mapping the
 * Bernstein ellipse E_rho (foci +-1) affinely onto [a^2, b^2]:
 * z(theta) = c + h (rho e^{i theta} + e^{-i theta} / rho) / 2 with
 * c = (a^2 + b^2) / 2 and h = (b^2 - a^2) / 2.
 */
class EllipseSampler {
 public:
  EllipseSampler(double a, double b, double rho, int samples = 4096);

  const std::vector<Complex>& points() const noexcept { return points_; }
  double rho() const noexcept { return rho_; }
  /// Largest admissible rho, (b + a) / (b - a); the ellipse then touches 0.
  static double rho_limit(double a, double b);

 private:
  double rho_;
  std::vector<Complex> points_;
};

struct ChuiHassonConstant {
  double c = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

/**
 * C = M1 + M2 + (N1 + N2) / a with the maxima sampled on the ellipse.
 * f2 is the continuation of f to the right half-plane, evaluated at sqrt(w);
 * f1 lives on the left half-plane and is evaluated at -sqrt(w). Any
 * non-finite sample makes C = +inf.
 */
ChuiHassonConstant chui_hasson_constant(const ScalarFunction::ComplexEval& f1, const ScalarFunction::ComplexEval& f2,
                                        double a, double b, double rho, int samples = 4096);

/// Odd extension f1(z) = -f2(-z) of a right half-plane continuation.
ScalarFunction::ComplexEval odd_extension(const ScalarFunction::ComplexEval& f2);

/// Bound values per k plus the constants that produced them.
struct BoundCurve {
  std::string name;
  Series values;
  std::map<std::string, double> constants;
};

/**
 * 2 C ||b|| rho/(rho-1) rho^{-k}, minimized for each k over `rho_grid_size`
 * log-spaced rho in (1, rho_max], rho_max = (sigma_1 + sigma_n)/(sigma_1 - sigma_n).
 * Without the constant the curve is rho_max^{-k}. Requires f.analytic when
 * the constant is included.
 */
BoundCurve polynomial_bound_curve(const ScalarFunction& f, double sigma_n, double sigma_1, double bnorm, int k_max,
                                  bool include_constant = true, int rho_grid_size = 40);

struct RhoBranches {
  double first = 0.0;   // from sqrt(s_max^2 - xi) and sqrt(s_min^2 - xi)
  double second = 0.0;  // weighted by s_max and s_min
  double rho = 0.0;     // max of the two
};

RhoBranches rho_of(double sigma_min, double sigma_max, double xi);

/// 2 M rho^k / (1 - rho) with rho from rho_of.
double si_style_bound(double sigma_min, double sigma_max, double xi, double m, int k);

/// 2 ||b|| M sqrt(s_max/s_min) exp(-2 k sqrt(s_min/s_max)), for xi = -s_min s_max.
double si_closed_form_bound(double sigma_min, double sigma_max, double bnorm, double m, int k);

/**
 * M = sup |h| on (0, 1/(-xi)] with h(z) = g(1/z + xi), g(t) = f(sqrt t)/sqrt t.
 * Sampled through t = 1/z + xi on a log grid covering [1e-14, 1e14] (-xi)
 * together with a uniform grid in z.
 */
double si_constant_m(const ScalarFunction& f, double xi, int samples = 4096);

/**
 * Error bound curve for a constant finite pole xi < 0: the closed form when
 * xi = -sigma_min sigma_max (relative 1e-12), otherwise
 * 2 sigma_max ||b|| si_style_bound. Without the constant, exp(-2 k sqrt(s_min/s_max))
 * or rho^k respectively.
 */
BoundCurve shift_invert_bound_curve(const ScalarFunction& f, double sigma_min, double sigma_max, double xi,
                                    double bnorm, int k_max, bool include_constant = true);

/**
 * 2 ||b|| max_grid |f(z) - p(z)/q(z^2)| for the discrete least-squares fit p of
 * degree 2k-1 with q built from poles xi_1..xi_{k-1}, on `grid_size`
 * Chebyshev points per half of (-I) u I, I = [sigma_n, sigma_1].
 */
double quasi_optimal_rational_bound(const ScalarFunction& f, const PoleSequence& poles, double sigma_n,
                                    double sigma_1, double bnorm, int k, int grid_size = 2000);

/// The bound above for k = 1..k_max as a running minimum over k.
BoundCurve quasi_optimal_rational_curve(const ScalarFunction& f, const PoleSequence& poles, double sigma_n,
                                        double sigma_1, double bnorm, int k_max, int grid_size = 2000);

}  // namespace gmf
