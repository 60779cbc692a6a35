#include "gmf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmf/errors.hpp"

namespace gmf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_interval(double lo, double hi, const char* who) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw InvalidArgument(std::string(who) + ": need 0 < sigma_min < sigma_max");
}

}  // namespace

double EllipseSampler::rho_limit(double a, double b) { return (b + a) / (b - a); }

EllipseSampler::EllipseSampler(double a, double b, double rho, int samples) : rho_(rho) {
  check_interval(a, b, "EllipseSampler");
  if (samples < 4) throw InvalidArgument("EllipseSampler: need at least 4 samples");
  if (!(rho > 1.0) || rho > rho_limit(a, b) * (1.0 + 1e-12))
    throw InvalidArgument("EllipseSampler: rho must lie in (1, (b+a)/(b-a)]");
  const double c = 0.5 * (a * a + b * b);
  const double h = 0.5 * (b * b - a * a);
  points_.reserve(std::size_t(samples));
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    const Complex e = std::polar(1.0, theta);
    points_.push_back(c + 0.5 * h * (rho * e + std::conj(e) / rho));
  }
}

ScalarFunction::ComplexEval odd_extension(const ScalarFunction::ComplexEval& f2) {
  return [f2](Complex z) { return -f2(-z); };
}

ChuiHassonConstant chui_hasson_constant(const ScalarFunction::ComplexEval& f1, const ScalarFunction::ComplexEval& f2,
                                        double a, double b, double rho, int samples) {
  if (!f1 || !f2) throw InvalidArgument("chui_hasson_constant: complex evaluators required");
  const EllipseSampler ellipse(a, b, rho, samples);
  ChuiHassonConstant out;
  for (const Complex& w : ellipse.points()) {
    const Complex s = std::sqrt(w);
    const Complex right = f2(s);
    const Complex left = f1(-s);
    out.m2 = std::max(out.m2, std::abs(right));
    out.n2 = std::max(out.n2, std::abs(right / s));
    out.m1 = std::max(out.m1, std::abs(left));
    out.n1 = std::max(out.n1, std::abs(left / -s));
  }
  out.c = out.m1 + out.m2 + (out.n1 + out.n2) / a;
  if (!std::isfinite(out.c)) out.c = inf;
  return out;
}

BoundCurve polynomial_bound_curve(const ScalarFunction& f, double sigma_n, double sigma_1, double bnorm, int k_max,
                                  bool include_constant, int rho_grid_size) {
  check_interval(sigma_n, sigma_1, "polynomial_bound_curve");
  if (k_max < 1) throw InvalidArgument("polynomial_bound_curve: k_max must be >= 1");
  if (rho_grid_size < 1) throw InvalidArgument("polynomial_bound_curve: empty rho grid");
  const double rho_max = EllipseSampler::rho_limit(sigma_n, sigma_1);
  BoundCurve curve;
  curve.name = "chebyshev_ellipse";
  curve.constants["rho_max"] = rho_max;
  if (!include_constant) {
    for (int k = 1; k <= k_max; ++k) curve.values.push(k, std::pow(rho_max, -k));
    return curve;
  }
  if (!f.has_analytic()) throw InvalidArgument("polynomial_bound_curve: " + f.name + " has no complex continuation");

  const auto f1 = odd_extension(f.analytic);
  std::vector<double> rhos, consts;
  for (int i = 1; i <= rho_grid_size; ++i) {
    const double rho = std::exp(std::log(rho_max) * i / rho_grid_size);
    const double c = chui_hasson_constant(f1, f.analytic, sigma_n, sigma_1, rho).c;
    if (std::isfinite(c)) {
      rhos.push_back(rho);
      consts.push_back(c);
    }
  }
  double best_rho = 0.0, best_c = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double best = inf;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const double rho = rhos[i];
      const double value = 2.0 * consts[i] * bnorm * rho / (rho - 1.0) * std::pow(rho, -k);
      if (value < best) {
        best = value;
        best_rho = rho;
        best_c = consts[i];
      }
    }
    curve.values.push(k, best);
  }
  if (!rhos.empty()) {
    curve.constants["rho_at_k_max"] = best_rho;
    curve.constants["C_at_k_max"] = best_c;
  }
  return curve;
}

RhoBranches rho_of(double sigma_min, double sigma_max, double xi) {
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min) || !std::isfinite(sigma_max))
    throw InvalidArgument("rho_of: need 0 < sigma_min <= sigma_max");
  if (!(xi < 0.0) || !std::isfinite(xi)) throw InvalidArgument("rho_of: xi must be finite and negative");
  const double r_max = std::sqrt(sigma_max * sigma_max - xi);
  const double r_min = std::sqrt(sigma_min * sigma_min - xi);
  RhoBranches out;
  out.first = (r_max - r_min) / (r_max + r_min);
  out.second = (sigma_max * r_min - sigma_min * r_max) / (sigma_max * r_min + sigma_min * r_max);
  out.rho = std::max(out.first, out.second);
  return out;
}

double si_style_bound(double sigma_min, double sigma_max, double xi, double m, int k) {
  if (!(m > 0.0)) throw InvalidArgument("si_style_bound: M must be positive");
  if (k < 0) throw InvalidArgument("si_style_bound: k must be >= 0");
  const double rho = rho_of(sigma_min, sigma_max, xi).rho;
  return 2.0 * m * std::pow(rho, k) / (1.0 - rho);
}

double si_closed_form_bound(double sigma_min, double sigma_max, double bnorm, double m, int k) {
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min)) throw InvalidArgument("si_closed_form_bound: bad interval");
  return 2.0 * bnorm * m * std::sqrt(sigma_max / sigma_min) * std::exp(-2.0 * k * std::sqrt(sigma_min / sigma_max));
}

double si_constant_m(const ScalarFunction& f, double xi, int samples) {
  if (!(xi < 0.0) || !std::isfinite(xi)) throw InvalidArgument("si_constant_m: xi must be finite and negative");
  if (samples < 2) throw InvalidArgument("si_constant_m: need at least 2 samples");
  const double scale = -xi;
  auto g = [&f](double t) {
    const double s = std::sqrt(t);
    return std::abs(f(s) / s);
  };
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = scale * std::pow(10.0, -14.0 + 28.0 * i / (samples - 1));
    m = std::max(m, g(t));
  }
  for (int i = 1; i < samples; ++i) {
    const double z = double(i) / samples / scale;
    m = std::max(m, g(1.0 / z + xi));
  }
  return std::isfinite(m) ? m : inf;
}

BoundCurve shift_invert_bound_curve(const ScalarFunction& f, double sigma_min, double sigma_max, double xi,
                                    double bnorm, int k_max, bool include_constant) {
  check_interval(sigma_min, sigma_max, "shift_invert_bound_curve");
  if (k_max < 1) throw InvalidArgument("shift_invert_bound_curve: k_max must be >= 1");
  const double optimal = -sigma_min * sigma_max;
  const bool closed = std::abs(xi - optimal) <= 1e-12 * std::abs(optimal);
  const RhoBranches rho = rho_of(sigma_min, sigma_max, xi);
  BoundCurve curve;
  curve.name = "shift_invert";
  curve.constants["xi"] = xi;
  curve.constants["rho"] = rho.rho;
  curve.constants["mu_min"] = 1.0 / (sigma_max * sigma_max - xi);
  curve.constants["mu_max"] = 1.0 / (sigma_min * sigma_min - xi);
  const double m = include_constant ? si_constant_m(f, xi) : 1.0;
  if (include_constant) curve.constants["M"] = m;
  const double rate = std::sqrt(sigma_min / sigma_max);
  for (int k = 1; k <= k_max; ++k) {
    double value;
    if (!include_constant)
      value = closed ? std::exp(-2.0 * k * rate) : std::pow(rho.rho, k);
    else if (closed)
      value = si_closed_form_bound(sigma_min, sigma_max, bnorm, m, k);
    else
      value = 2.0 * sigma_max * bnorm * si_style_bound(sigma_min, sigma_max, xi, m, k);
    curve.values.push(k, value);
  }
  return curve;
}

namespace {

// Chebyshev points of the second kind on [lo, hi], endpoints included.
Vector chebyshev_grid(double lo, double hi, int count) {
  Vector x(count);
  for (int i = 0; i < count; ++i)
    x(i) = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(std::numbers::pi * i / (count - 1));
  return x;
}

}  // namespace

double quasi_optimal_rational_bound(const ScalarFunction& f, const PoleSequence& poles, double sigma_n,
                                    double sigma_1, double bnorm, int k, int grid_size) {
  check_interval(sigma_n, sigma_1, "quasi_optimal_rational_bound");
  if (k < 1) throw InvalidArgument("quasi_optimal_rational_bound: k must be >= 1");
  if (grid_size < 2) throw InvalidArgument("quasi_optimal_rational_bound: grid too small");
  if (k > 1) {
    validate_poles(poles, {sigma_n * sigma_n, sigma_1 * sigma_1});
    (void)poles.at(std::size_t(k - 1));
  }

  // f is odd and the grid symmetric, so the even basis functions decouple
  // and the fit reduces to z^{2i+1}/q(z^2), i < k, on the positive half.
  const Vector z = chebyshev_grid(sigma_n, sigma_1, grid_size);
  const Vector x = z.array().square();
  Vector target(grid_size);
  for (int i = 0; i < grid_size; ++i) target(i) = f(z(i));

  Vector start = z;
  const double top = sigma_1 * sigma_1;
  for (int j = 1; j < k; ++j) {
    const double xi = poles.at(std::size_t(j));
    if (is_infinite(xi)) continue;
    start.array() /= (x.array() - xi) / (top - xi);
  }

  // Vandermonde-with-Arnoldi: orthonormal basis of span{x^i start}.
  Matrix basis(grid_size, k);
  Index cols = 0;
  Vector v = start;
  for (int i = 0; i < k; ++i) {
    if (i > 0) v = x.cwiseProduct(basis.col(cols - 1));
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Index c = 0; c < cols; ++c) v -= basis.col(c).dot(v) * basis.col(c);
    const double after = v.norm();
    if (!(after > 1e-13 * before)) break;
    basis.col(cols++) = v / after;
  }
  const Matrix q = basis.leftCols(cols);
  const Vector residual = target - q * (q.transpose() * target);
  return 2.0 * bnorm * residual.cwiseAbs().maxCoeff();
}

BoundCurve quasi_optimal_rational_curve(const ScalarFunction& f, const PoleSequence& poles, double sigma_n,
                                        double sigma_1, double bnorm, int k_max, int grid_size) {
  if (k_max < 1) throw InvalidArgument("quasi_optimal_rational_curve: k_max must be >= 1");
  BoundCurve curve;
  curve.name = "quasi_optimal_rational";
  curve.constants["grid_size"] = grid_size;
  double running = inf;
  for (int k = 1; k <= k_max; ++k) {
    running = std::min(running, quasi_optimal_rational_bound(f, poles, sigma_n, sigma_1, bnorm, k, grid_size));
    curve.values.push(k, running);
  }
  return curve;
}

}  // namespace gmf
