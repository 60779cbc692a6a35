#include "gmf/scalar_functions.hpp"

#include <cmath>
#include <string>

#include "gmf/errors.hpp"

namespace gmf {

namespace {

using cplx = std::complex<double>;

ScalarFunction make(std::string name, ScalarFunction::RealEval eval, bool zero_limit,
                    ScalarFunction::ComplexEval analytic) {
  return ScalarFunction{std::move(name), std::move(eval), zero_limit, std::move(analytic)};
}

}  // namespace

ScalarFunction odd_monomial(int degree) {
  if (degree < 1 || degree % 2 == 0) throw InvalidArgument("odd_monomial: degree must be odd and positive");
  return make(
      "odd_monomial:" + std::to_string(degree), [degree](double z) { return std::pow(z, degree); },
      degree >= 3, [degree](cplx z) { return std::pow(z, degree); });
}

ScalarFunction odd_rational(int degree, const std::vector<double>& poles) {
  if (degree < 1 || degree % 2 == 0) throw InvalidArgument("odd_rational: degree must be odd and positive");
  std::vector<double> finite;
  for (double xi : poles)
    if (std::isfinite(xi)) finite.push_back(xi);
  auto eval = [degree, finite](double z) {
    double value = std::pow(z, degree);
    for (double xi : finite) value /= (z * z - xi);
    return value;
  };
  auto analytic = [degree, finite](cplx z) {
    cplx value = std::pow(z, degree);
    for (double xi : finite) value /= (z * z - xi);
    return value;
  };
  // f(z)/z = z^(degree-1)/q(z^2) vanishes at 0 iff degree >= 3 and no pole sits at 0.
  bool zero_limit = degree >= 3;
  for (double xi : finite)
    if (xi == 0.0) zero_limit = false;
  return make("odd_rational:" + std::to_string(degree), eval, zero_limit, analytic);
}

std::vector<std::string> builtin_names() {
  return {"sqrt", "inv_quarter", "sqrt_log", "sinh", "sin", "z_log_z", "sqrt_log1p_sqrt", "identity",
          "odd_monomial:<degree>"};
}

ScalarFunction builtin(const std::string& name) {
  if (name == "sqrt")
    return make(name, [](double z) { return std::sqrt(z); }, false, [](cplx z) { return std::sqrt(z); });
  if (name == "inv_quarter")
    return make(name, [](double z) { return 1.0 / std::sqrt(std::sqrt(z)); }, false,
                [](cplx z) { return 1.0 / std::sqrt(std::sqrt(z)); });
  if (name == "sqrt_log")
    return make(name, [](double z) { return std::sqrt(z) * std::log(z); }, false,
                [](cplx z) { return std::sqrt(z) * std::log(z); });
  if (name == "sinh")
    return make(name, [](double z) { return std::sinh(z); }, false, [](cplx z) { return std::sinh(z); });
  if (name == "sin")
    return make(name, [](double z) { return std::sin(z); }, false, [](cplx z) { return std::sin(z); });
  if (name == "z_log_z")
    return make(name, [](double z) { return z * std::log(z); }, false, [](cplx z) { return z * std::log(z); });
  if (name == "sqrt_log1p_sqrt")
    return make(name, [](double z) { return std::sqrt(z) * std::log1p(std::sqrt(z)); }, false,
                [](cplx z) {
                  const cplx s = std::sqrt(z);
                  return s * std::log(1.0 + s);
                });
  if (name == "identity") return make(name, [](double z) { return z; }, false, [](cplx z) { return z; });

  const std::string prefix = "odd_monomial:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string digits = name.substr(prefix.size());
    std::size_t used = 0;
    int degree = 0;
    try {
      degree = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) throw InvalidArgument("bad odd_monomial degree in '" + name + "'");
    return odd_monomial(degree);
  }
  throw InvalidArgument("unknown function '" + name + "'");
}

ScalarFunction companion_g(const ScalarFunction& f) {
  auto fe = f.eval;
  const bool zero_limit = f.zero_limit;
  auto eval = [fe, zero_limit](double z) {
    if (z == 0.0) {
      if (zero_limit) return 0.0;
      throw InvalidArgument("companion g is undefined at 0 unless f(z)/z -> 0");
    }
    const double s = std::sqrt(z);
    return fe(s) / s;
  };
  ScalarFunction::ComplexEval analytic;
  if (f.analytic) {
    auto fa = f.analytic;
    analytic = [fa](cplx z) {
      const cplx s = std::sqrt(z);
      return fa(s) / s;
    };
  }
  // g(z)/z -> 0 would need f(z) = o(z^3); not tracked.
  return make("g[" + f.name + "]", eval, false, analytic);
}

}  // namespace gmf
