// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status 1 if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "gmf/bounds.hpp"
#include "gmf/gmf_reference.hpp"
#include "gmf/golub_kahan.hpp"
#include "gmf/harness.hpp"
#include "gmf/rational_golub_kahan.hpp"
#include "gmf/rational_krylov.hpp"
#include "gmf/rectangular.hpp"

using namespace gmf;

namespace {

// Pinned tolerances.
constexpr double tol_invariance = 1e-9;
constexpr double max_runtime_invariance = 1.0;  // seconds
constexpr double tol_poly_exact = 1e-11;
constexpr double tol_rational_exact = 1e-9;
constexpr double tol_interlacing = 1e-10;
constexpr double tol_rank_one = 1e-8;
constexpr double tol_generators = 1e-9;
constexpr double tol_short_entries = 1e-8;
constexpr double tol_short_iterates = 1e-6;
constexpr double tol_gk_reduction = 1e-10;
constexpr double tol_rate = 0.25;
constexpr double tol_branches = 1e-6;
constexpr double tol_transpose = 1e-9;
constexpr double tol_micro = 1e-18;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

LinearOperator square_test_matrix(Index n, ProfileKind kind, double lo, double hi, std::uint64_t seed) {
  return synthesize_test_matrix(n, n, singular_profile(kind, n, lo, hi), seed);
}

double fitted_slope(const Series& s, int k_lo, int k_hi, double scale = 1.0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.k[i] < k_lo || s.k[i] > k_hi) continue;
    const double x = s.k[i];
    const double y = std::log(s.value[i] * scale);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double max_singular_value_spread(const Matrix& b, double lo, double hi) {
  // Largest violation of sigma(B) in [lo, hi]; <= 0 means inside.
  const Vector s = Eigen::JacobiSVD<Matrix>(b).singularValues();
  return std::max(s.maxCoeff() - hi, lo - s.minCoeff());
}

Outcome criterion1() {
  std::vector<double> values;
  for (int i = 30; i >= 1; --i) values.push_back(i);
  const LinearOperator op = synthesize_test_matrix(30, 30, SingularProfile::from_values(values), 7);
  const Vector b = gaussian_vector(30, 7, 1);
  const ScalarFunction f = builtin("sqrt");
  const Vector ref = gmf_apply_reference(f, op.dense(), b);
  const PoleSequence si = si_optimal_pole(1.0, 30.0, 30);

  const auto start = std::chrono::steady_clock::now();
  struct Named {
    const char* name;
    KrylovRun run;
  };
  std::vector<Named> runs;
  runs.push_back({"golub_kahan", gk_approximate(f, op, b, 30, true, ref)});
  runs.push_back({"rational_full", rational_gmf_approximate(f, op, b, si, 30, ref)});
  runs.push_back({"rational_short", rgk_run(f, op, b, si, 30, ref).run});
  runs.push_back({"transpose_trick", gmf_via_transpose(f, op, b, KrylovMethod::rational_full, si, 30, ref)});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Outcome out;
  for (const auto& r : runs) {
    const double err = relative_error(r.run.iterates.back(), ref);
    out.pass = out.pass && err <= tol_invariance;
    out.detail += std::string(r.name) + fmt("=%.1e ", err);
  }
  out.pass = out.pass && seconds < max_runtime_invariance;
  out.detail += fmt("time=%.2fs", seconds);
  return out;
}

Outcome criterion2() {
  const LinearOperator op = synthesize_test_matrix(40, 25, singular_profile(ProfileKind::chebyshev2, 25, 0.1, 10.0), 3);
  const Vector b = gaussian_vector(25, 3, 1);
  Outcome out;
  const int cases[4][2] = {{1, 1}, {2, 2}, {3, 3}, {3, 5}};
  for (const auto& c : cases) {
    const int ell = c[0], k = c[1];
    const ScalarFunction f = odd_monomial(2 * ell - 1);
    const Vector ref = gmf_apply_reference(f, op.dense(), b);
    const KrylovRun run = gk_approximate(f, op, b, k, true);
    const double err = relative_error(run.iterates[std::size_t(k - 1)], ref);
    out.pass = out.pass && err <= tol_poly_exact;
    out.detail += "(" + std::to_string(ell) + "," + std::to_string(k) + ")" + fmt("=%.1e ", err);
  }
  return out;
}

Outcome criterion3() {
  const LinearOperator op = synthesize_test_matrix(40, 25, singular_profile(ProfileKind::chebyshev2, 25, 0.1, 10.0), 3);
  const Vector b = gaussian_vector(25, 3, 1);
  const std::vector<double> xi = {-1.5, -3.0};
  const PoleSequence poles = explicit_poles(xi);
  Outcome out;
  for (int ell = 1; ell <= 3; ++ell) {
    const ScalarFunction f = odd_rational(2 * ell - 1, xi);
    const Vector ref = gmf_apply_reference(f, op.dense(), b);
    const double full = relative_error(rational_gmf_approximate(f, op, b, poles, 3).iterates[2], ref);
    const double shrt = relative_error(rgk_run(f, op, b, poles, 3).run.iterates[2], ref);
    out.pass = out.pass && full <= tol_rational_exact && shrt <= tol_rational_exact;
    out.detail += "l=" + std::to_string(ell) + fmt(" full=%.1e short=%.1e; ", full, shrt);
  }
  return out;
}

Outcome criterion4() {
  Outcome out;
  double worst = -1e300;
  for (int seed = 1; seed <= 20; ++seed) {
    const double lo = 0.1, hi = 10.0;
    const LinearOperator op =
        synthesize_test_matrix(60, 40, singular_profile(ProfileKind::chebyshev2, 40, lo, hi), std::uint64_t(seed));
    const Vector b = gaussian_vector(40, std::uint64_t(seed), 1);
    const int k = 20;
    PoleSequence poles;
    switch (seed % 3) {
      case 0: poles = polynomial_poles(k); break;
      case 1: poles = extended_poles(k); break;
      default: poles = si_optimal_pole(lo, hi, k); break;
    }
    const KrylovRun run = rational_gmf_approximate(builtin("sqrt"), op, b, poles, k);
    for (Index j = 1; j <= run.projected.rows(); ++j)
      worst = std::max(worst, max_singular_value_spread(run.projected.topLeftCorner(j, j), lo, hi));
  }
  out.pass = worst <= tol_interlacing;
  out.detail = fmt("largest excursion outside [sigma_n, sigma_1] = %.1e", std::max(worst, 0.0));
  return out;
}

double second_singular_value_of_upper_blocks(const Matrix& b) {
  double worst = 0.0;
  const Index k = b.rows();
  for (Index i = 1; i < k; ++i) {
    const Matrix block = b.block(0, i, i, k - i);
    const Vector s = Eigen::JacobiSVD<Matrix>(block).singularValues();
    if (s.size() > 1) worst = std::max(worst, s(1));
  }
  return worst;
}

Outcome criterion5() {
  const LinearOperator op = square_test_matrix(50, ProfileKind::chebyshev2, 0.1, 10.0, 4);
  const Vector b = gaussian_vector(50, 4, 1);
  const ScalarFunction f = builtin("sqrt");
  const std::vector<PoleSequence> schedules = {
      si_optimal_pole(0.1, 10.0, 15),
      explicit_poles({-0.05, -0.3, -1.0, -4.0, -20.0, -0.1, -2.0, -50.0, -0.5, -8.0, -0.02, -3.0, -0.7, -12.0}),
  };
  Outcome out;
  double rank_defect = 0.0, generator_err = 0.0;
  for (const auto& poles : schedules) {
    const KrylovRun full = rational_gmf_approximate(f, op, b, poles, 15);
    const RgkResult shrt = rgk_run(f, op, b, poles, 15);
    for (Index k = 2; k <= full.projected.rows(); ++k) {
      const Matrix bk = full.projected.topLeftCorner(k, k);
      rank_defect = std::max(rank_defect, second_singular_value_of_upper_blocks(bk) / bk.norm());
    }
    const auto g = shrt.b.generators();
    const Index k = std::min<Index>(full.projected.rows(), shrt.b.k());
    Matrix uv = (g.u.head(k) * g.v.head(k).transpose()).triangularView<Eigen::StrictlyUpper>();
    Matrix ref = full.projected.topLeftCorner(k, k).triangularView<Eigen::StrictlyUpper>();
    generator_err = std::max(generator_err, (uv - ref).cwiseAbs().maxCoeff());
  }
  out.pass = rank_defect <= tol_rank_one && generator_err <= tol_generators;
  out.detail = fmt("max sigma_2/||B|| = %.1e, generator mismatch = %.1e", rank_defect, generator_err);
  return out;
}

Outcome criterion6() {
  const LinearOperator op = square_test_matrix(200, ProfileKind::logspace, 0.1, 100.0, 5);
  const Vector b = gaussian_vector(200, 5, 1);
  const ScalarFunction f = builtin("sqrt");
  const PoleSequence si = si_optimal_pole(0.1, 100.0, 25);
  const KrylovRun full = rational_gmf_approximate(f, op, b, si, 25);
  const RgkResult shrt = rgk_run(f, op, b, si, 25);
  double entry_err = 0.0, iterate_err = 0.0;
  const Matrix dense = shrt.b.reconstruct_dense();
  for (Index i = 0; i < std::min<Index>(20, dense.rows()); ++i) {
    entry_err = std::max(entry_err, std::abs(dense(i, i) - full.projected(i, i)));
    if (i >= 1) entry_err = std::max(entry_err, std::abs(dense(i - 1, i) - full.projected(i - 1, i)));
    if (i >= 2) entry_err = std::max(entry_err, std::abs(dense(i - 2, i) - full.projected(i - 2, i)));
  }
  const int steps = std::min(full.steps(), shrt.run.steps());
  for (int k = 0; k < steps; ++k)
    iterate_err = std::max(iterate_err, relative_error(shrt.run.iterates[std::size_t(k)], full.iterates[std::size_t(k)]));
  Outcome out;
  out.pass = entry_err <= tol_short_entries && iterate_err <= tol_short_iterates && steps == 25;
  out.detail = fmt("(d, beta, gamma) max diff k<=20: %.1e; iterate diff k<=25: %.1e; drift at k=25: %.1e", entry_err,
                   iterate_err, shrt.run.trace.orthogonality_drift.value.back());
  return out;
}

Outcome criterion7() {
  const LinearOperator op = synthesize_test_matrix(60, 40, singular_profile(ProfileKind::chebyshev2, 40, 0.1, 10.0), 2);
  const Vector b = gaussian_vector(40, 2, 1);
  const int k = 20;
  const RgkResult shrt = rgk_run(builtin("sqrt"), op, b, polynomial_poles(k), k);
  BidiagonalState gk = gk_init(op, b, false);
  for (int j = 0; j < k; ++j) gk_step(gk, op);
  double err = 0.0;
  for (int j = 0; j < k; ++j) {
    err = std::max(err, std::abs(shrt.b.d[std::size_t(j)] - gk.alpha[std::size_t(j)]));
    if (j + 1 < k) err = std::max(err, std::abs(shrt.b.beta[std::size_t(j)] - gk.beta[std::size_t(j)]));
  }
  double gamma = 0.0;
  for (double g : shrt.b.gamma) gamma = std::max(gamma, std::abs(g));
  Outcome out;
  out.pass = err <= tol_gk_reduction;
  out.detail = fmt("max |alpha, beta difference| = %.1e, max |gamma| = %.1e", err, gamma);
  return out;
}

struct SiSetup {
  LinearOperator op;
  Vector b;
  ScalarFunction f;
  double lo, hi, xi;
};

SiSetup criterion8_setup() {
  const double lo = 0.1, hi = 10.0;
  return {square_test_matrix(300, ProfileKind::logspace, lo, hi, 8), gaussian_vector(300, 8, 1),
          builtin("sqrt_log1p_sqrt"), lo, hi, -lo * hi};
}

Outcome criterion8() {
  const SiSetup s = criterion8_setup();
  const Vector ref = gmf_apply_reference(s.f, s.op.dense(), s.b);
  const int k_max = 40;
  const KrylovRun run = rational_gmf_approximate(s.f, s.op, s.b, si_optimal_pole(s.lo, s.hi, k_max), k_max, ref);
  const double m = si_constant_m(s.f, s.xi);
  const double yref = ref.norm();
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < run.trace.error.size(); ++i) {
    const int k = run.trace.error.k[i];
    const double abs_err = run.trace.error.value[i] * yref;
    worst_ratio = std::max(worst_ratio, abs_err / si_closed_form_bound(s.lo, s.hi, s.b.norm(), m, k));
  }
  const double slope = fitted_slope(run.trace.error, 5, 30);
  const double target = -2.0 * std::sqrt(s.lo / s.hi);
  const double rel = std::abs(slope - target) / std::abs(target);
  Outcome out;
  out.pass = worst_ratio <= 1.0 && rel <= tol_rate && run.steps() == k_max;
  out.detail = fmt("max error/bound = %.2e (M = %.3f); ", worst_ratio, m) +
               fmt("slope over k in [5,30] = %.4f vs %.4f (off by %.0f%%)", slope, target, 100 * rel);
  return out;
}

Outcome criterion9() {
  const double lo = 0.1, hi = 10.0;
  const Index n = 1000;
  const int k_max = 300;
  const LinearOperator op = square_test_matrix(n, ProfileKind::chebyshev2, lo, hi, 9);
  const Vector b = gaussian_vector(n, 9, 1);
  const ScalarFunction f = builtin("sqrt");
  const Vector ref = gmf_apply_reference(f, op.dense(), b);
  const KrylovRun run = gk_approximate(f, op, b, k_max, true, ref);
  const double slope = fitted_slope(run.trace.error, 200, 300);
  const double target = -std::log((hi + lo) / (hi - lo));
  const double rel = std::abs(slope - target) / std::abs(target);
  Outcome out;
  out.pass = rel <= tol_rate && run.steps() == k_max;
  out.detail = fmt("slope over k in [200,300] = %.5f vs %.5f (off by %.0f%%)", slope, target, 100 * rel);
  return out;
}

Outcome criterion10() {
  std::mt19937_64 rng(derive_seed(10, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double branch_gap = 0.0;
  int worst_cells = 0;
  const int grid = 400;
  for (int trial = 0; trial < 10; ++trial) {
    const double smin = std::pow(10.0, -2.0 + 2.0 * unit(rng));
    const double smax = smin * std::pow(10.0, 0.5 + 2.5 * unit(rng));
    const double opt = -smin * smax;
    const RhoBranches r = rho_of(smin, smax, opt);
    branch_gap = std::max(branch_gap, std::abs(r.first - r.second) / std::max(r.first, r.second));
    // xi on a log grid over [-smax^2, -smin^2] * (1 +- margin); bound at k = 10 with M = 1.
    const double a = std::log(smin * smin / 4), c = std::log(4 * smax * smax);
    int arg = 0;
    double best = 1e300;
    for (int i = 0; i < grid; ++i) {
      const double xi = -std::exp(a + (c - a) * i / (grid - 1));
      const double v = si_style_bound(smin, smax, xi, 1.0, 10);
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    const double cell = (std::log(-opt) - a) / (c - a) * (grid - 1);
    worst_cells = std::max(worst_cells, int(std::ceil(std::abs(arg - cell) - 1e-9)));
  }
  Outcome out;
  out.pass = branch_gap <= tol_branches && worst_cells <= 1;
  out.detail = fmt("max branch gap = %.1e, max argmin distance = %.0f cells", branch_gap, worst_cells);
  return out;
}

Outcome criterion11() {
  const Index m = 100, n = 150;
  const double lo = 1e-2, hi = 10.0;
  const LinearOperator op = synthesize_test_matrix(m, n, singular_profile(ProfileKind::chebyshev2, m, lo, hi), 11);
  const Vector b = gaussian_vector(n, 11, 1);
  const ScalarFunction f = builtin("sqrt");
  const Vector ref = gmf_apply_reference(f, op.dense(), b);
  const PoleSequence si = si_optimal_pole(lo, hi, 100);
  const KrylovRun direct = rational_gmf_approximate(f, op, b, si, 100, ref);
  const KrylovRun trans = gmf_via_transpose(f, op, b, KrylovMethod::rational_full, si, 100, ref);
  const double e_direct = direct.trace.error.value.back();
  const double e_trans = trans.trace.error.value.back();
  Outcome out;
  out.pass = e_trans <= tol_transpose && e_trans < e_direct;
  out.detail = fmt("final errors: transpose %.1e, direct %.1e", e_trans, e_direct);
  return out;
}

Outcome criterion12() {
  const double eps = 1e-6;
  Matrix a(1, 2);
  a << 1.0, 0.0;
  const LinearOperator op = LinearOperator::from_dense(a);
  Vector b(2);
  b << eps, 1.0;
  const KrylovRun run = rational_gmf_approximate(builtin("identity"), op, b, polynomial_poles(1), 1);
  const double b1 = run.projected(0, 0);
  Outcome out;
  out.pass = std::abs(b1 - eps) <= tol_micro;
  out.detail = fmt("B_1 = %.17g, |B_1 - eps| = %.1e", b1, std::abs(b1 - eps));
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion13() {
  const std::string config_text = R"({
    "name": "determinism",
    "matrix": {"m": 300, "n": 300, "profile": "logspace", "interval": [0.1, 10], "seed": 8},
    "vector": {"seed": 8},
    "function": "sqrt_log1p_sqrt",
    "k_max": 40,
    "curves": [
      {"label": "shift_invert", "method": "rational_full", "poles": {"kind": "shift_invert"}, "bounds": ["shift_invert"]},
      {"label": "shift_invert_short", "method": "rational_short", "poles": {"kind": "shift_invert"}}
    ],
    "differences": [["shift_invert_short", "shift_invert"]]
  })";
  const auto root = std::filesystem::temp_directory_path() / "gmf_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::vector<std::filesystem::path>> outputs;
  for (const char* sub : {"first", "second"}) {
    ExperimentConfig cfg = ExperimentConfig::parse(config_text);
    cfg.output_dir = root / sub;
    outputs.push_back(run_experiment(cfg).files);
  }
  Outcome out;
  int compared = 0;
  out.pass = outputs[0].size() == outputs[1].size() && !outputs[0].empty();
  for (std::size_t i = 0; out.pass && i < outputs[0].size(); ++i) {
    out.pass = outputs[0][i].filename() == outputs[1][i].filename() && slurp(outputs[0][i]) == slurp(outputs[1][i]);
    ++compared;
  }
  std::filesystem::remove_all(root);
  out.detail = std::to_string(compared) + " output files compared byte for byte";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence at invariance", criterion1},
      {"polynomial exactness", criterion2},
      {"rational exactness", criterion3},
      {"interlacing", criterion4},
      {"quasiseparable structure", criterion5},
      {"short recurrence fidelity", criterion6},
      {"reduction to Golub-Kahan", criterion7},
      {"shift-invert bound dominance and rate", criterion8},
      {"polynomial rate", criterion9},
      {"optimal shift-invert pole", criterion10},
      {"rectangular transpose trick", criterion11},
      {"micro example", criterion12},
      {"determinism", criterion13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-40s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
