#include "gmf/harness.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gmf/errors.hpp"
#include "gmf/gmf_reference.hpp"
#include "gmf/poles.hpp"

namespace gmf {

using json = nlohmann::json;

namespace {

std::string where(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidArgument("config: unknown key '" + where(ctx, it.key()) + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidArgument("config: missing key '" + where(ctx, key) + "'");
  return *it;
}

void require_object(const json& value, const std::string& ctx) {
  if (!value.is_object()) throw InvalidArgument("config: '" + ctx + "' must be an object");
}

std::string get_string(const json& value, const std::string& ctx) {
  if (!value.is_string()) throw InvalidArgument("config: '" + ctx + "' must be a string");
  return value.get<std::string>();
}

double get_number(const json& value, const std::string& ctx) {
  if (!value.is_number()) throw InvalidArgument("config: '" + ctx + "' must be a number");
  return value.get<double>();
}

std::int64_t get_integer(const json& value, const std::string& ctx) {
  if (!value.is_number_integer()) throw InvalidArgument("config: '" + ctx + "' must be an integer");
  return value.get<std::int64_t>();
}

bool get_bool(const json& value, const std::string& ctx) {
  if (!value.is_boolean()) throw InvalidArgument("config: '" + ctx + "' must be true or false");
  return value.get<bool>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

bool safe_label(const std::string& label) {
  if (label.empty()) return false;
  for (char c : label)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

MatrixSpec parse_matrix(const json& j, const std::filesystem::path& base) {
  require_object(j, "matrix");
  MatrixSpec spec;
  if (j.contains("file")) {
    reject_unknown(j, {"file"}, "matrix");
    spec.file = resolve(base, get_string(j["file"], "matrix.file"));
    return spec;
  }
  reject_unknown(j, {"m", "n", "profile", "interval", "seed"}, "matrix");
  const auto m = get_integer(require(j, "m", "matrix"), "matrix.m");
  const auto n = get_integer(require(j, "n", "matrix"), "matrix.n");
  if (m < 1 || n < 1) throw InvalidArgument("config: matrix dimensions must be positive");
  spec.m = m;
  spec.n = n;
  spec.profile = parse_profile_kind(get_string(require(j, "profile", "matrix"), "matrix.profile"));
  if (spec.profile == ProfileKind::explicit_list)
    throw InvalidArgument("config: matrix.profile must be chebyshev2 or logspace");
  const json& interval = require(j, "interval", "matrix");
  if (!interval.is_array() || interval.size() != 2) throw InvalidArgument("config: matrix.interval must be [lo, hi]");
  spec.lo = get_number(interval[0], "matrix.interval[0]");
  spec.hi = get_number(interval[1], "matrix.interval[1]");
  if (!(spec.lo > 0.0) || !(spec.hi > spec.lo) || !std::isfinite(spec.hi))
    throw InvalidArgument("config: matrix.interval must satisfy 0 < lo < hi");
  const auto seed = get_integer(require(j, "seed", "matrix"), "matrix.seed");
  if (seed < 0) throw InvalidArgument("config: matrix.seed must be nonnegative");
  spec.seed = std::uint64_t(seed);
  return spec;
}

VectorSpec parse_vector(const json& j, const std::filesystem::path& base) {
  require_object(j, "vector");
  VectorSpec spec;
  if (j.contains("file")) {
    reject_unknown(j, {"file"}, "vector");
    spec.file = resolve(base, get_string(j["file"], "vector.file"));
    return spec;
  }
  reject_unknown(j, {"seed"}, "vector");
  const auto seed = get_integer(require(j, "seed", "vector"), "vector.seed");
  if (seed < 0) throw InvalidArgument("config: vector.seed must be nonnegative");
  spec.seed = std::uint64_t(seed);
  return spec;
}

PoleSpec parse_poles(const json& j, const std::string& ctx, const std::filesystem::path& base) {
  require_object(j, ctx);
  reject_unknown(j, {"kind", "values", "file"}, ctx);
  PoleSpec spec;
  spec.kind = get_string(require(j, "kind", ctx), ctx + ".kind");
  if (spec.kind == "explicit") {
    const json& values = require(j, "values", ctx);
    if (!values.is_array() || values.empty()) throw InvalidArgument("config: '" + ctx + ".values' must be a nonempty array");
    for (const auto& v : values) {
      if (v.is_string() && (v == "inf" || v == "+inf" || v == "Inf"))
        spec.values.push_back(infinite_pole);
      else
        spec.values.push_back(get_number(v, ctx + ".values[]"));
    }
  } else if (spec.kind == "file") {
    spec.file = resolve(base, get_string(require(j, "file", ctx), ctx + ".file"));
  } else if (spec.kind != "polynomial" && spec.kind != "extended" && spec.kind != "shift_invert") {
    throw InvalidArgument("config: '" + ctx + ".kind' must be polynomial, extended, shift_invert, explicit or file");
  }
  if (spec.kind != "explicit" && j.contains("values"))
    throw InvalidArgument("config: '" + ctx + ".values' is only valid with kind explicit");
  if (spec.kind != "file" && j.contains("file"))
    throw InvalidArgument("config: '" + ctx + ".file' is only valid with kind file");
  return spec;
}

CurveSpec parse_curve(const json& j, std::size_t index, const std::filesystem::path& base) {
  const std::string ctx = "curves[" + std::to_string(index) + "]";
  require_object(j, ctx);
  reject_unknown(j, {"label", "method", "transpose", "poles", "reorthogonalize", "bounds", "bound_constant"}, ctx);
  CurveSpec curve;
  curve.label = get_string(require(j, "label", ctx), ctx + ".label");
  if (!safe_label(curve.label))
    throw InvalidArgument("config: '" + ctx + ".label' may only contain letters, digits, '_', '-' and '.'");
  const std::string method = get_string(require(j, "method", ctx), ctx + ".method");
  if (method == "transpose_trick") {
    curve.method = KrylovMethod::rational_full;
    curve.transpose = true;
  } else {
    curve.method = parse_method(method);
  }
  if (j.contains("transpose")) curve.transpose = curve.transpose || get_bool(j["transpose"], ctx + ".transpose");
  if (j.contains("reorthogonalize")) curve.reorthogonalize = get_bool(j["reorthogonalize"], ctx + ".reorthogonalize");
  if (j.contains("bound_constant")) curve.bound_constant = get_bool(j["bound_constant"], ctx + ".bound_constant");
  if (j.contains("poles")) {
    curve.poles = parse_poles(j["poles"], ctx + ".poles", base);
  } else if (curve.method != KrylovMethod::golub_kahan) {
    throw InvalidArgument("config: '" + ctx + "' uses a rational method and needs 'poles'");
  }
  if (curve.method == KrylovMethod::golub_kahan && curve.poles.kind != "polynomial")
    throw InvalidArgument("config: '" + ctx + "' golub_kahan only accepts polynomial poles");
  if (j.contains("bounds")) {
    const json& bounds = j["bounds"];
    if (!bounds.is_array()) throw InvalidArgument("config: '" + ctx + ".bounds' must be an array");
    for (const auto& b : bounds) curve.bounds.push_back(parse_bound_kind(get_string(b, ctx + ".bounds[]")));
  }
  for (BoundKind kind : curve.bounds) {
    if (kind == BoundKind::chebyshev_ellipse && curve.poles.kind != "polynomial")
      throw InvalidArgument("config: '" + ctx + "' chebyshev_ellipse bound needs polynomial poles");
    if (kind == BoundKind::shift_invert && curve.poles.kind != "shift_invert" && curve.poles.kind != "explicit")
      throw InvalidArgument("config: '" + ctx + "' shift_invert bound needs a constant negative pole");
  }
  return curve;
}

struct Problem {
  LinearOperator op;
  Vector b;
  double sigma_min;
  double sigma_max;
};

Problem build_problem(const ExperimentConfig& config) {
  const MatrixSpec& ms = config.matrix;
  std::optional<LinearOperator> op;
  double smin = 0.0, smax = 0.0;
  if (ms.file) {
    Matrix a = load_matrix(*ms.file);
    const CompactSvd svd = compact_svd(a);
    if (svd.rank() == 0) throw InvalidArgument("matrix file holds the zero matrix");
    smax = svd.sigma(0);
    smin = svd.sigma(svd.rank() - 1);
    op = LinearOperator::from_dense(std::move(a));
  } else {
    const SingularProfile profile = singular_profile(ms.profile, std::min(ms.m, ms.n), ms.lo, ms.hi);
    op = synthesize_test_matrix(ms.m, ms.n, profile, ms.seed);
    smin = ms.lo;
    smax = ms.hi;
  }
  Vector b;
  if (config.vector.file) {
    b = load_vector(*config.vector.file);
    if (b.size() != op->cols())
      throw DimensionMismatch("vector file has " + std::to_string(b.size()) + " entries, A has " +
                              std::to_string(op->cols()) + " columns");
  } else {
    b = gaussian_vector(op->cols(), config.vector.seed);
  }
  if (!(b.norm() > 0.0)) throw InvalidArgument("the vector b must be nonzero");
  return {std::move(*op), std::move(b), smin, smax};
}

PoleSequence build_poles(const CurveSpec& curve, const ExperimentConfig& config, double smin, double smax) {
  const PoleSpec& spec = curve.poles;
  const int k = std::max(config.k_max, 1);
  PoleSequence seq;
  if (spec.kind == "polynomial") seq = polynomial_poles(k);
  else if (spec.kind == "extended") seq = extended_poles(k);
  else if (spec.kind == "shift_invert") seq = si_optimal_pole(smin, smax, k);
  else if (spec.kind == "explicit") seq = explicit_poles(spec.values);
  else seq = load_user_poles(*spec.file);
  validate_poles(seq, {smin * smin, smax * smax});
  return seq;
}

double constant_pole(const PoleSequence& poles, const std::string& label) {
  const double xi = poles.at(1);
  for (double p : poles.poles)
    if (p != xi) throw InvalidArgument("curve '" + label + "': shift_invert bound needs a single repeated pole");
  if (!(xi < 0.0) || !std::isfinite(xi))
    throw InvalidArgument("curve '" + label + "': shift_invert bound needs a finite negative pole");
  return xi;
}

std::vector<BoundCurve> evaluate_bounds(const CurveSpec& curve, const ScalarFunction& f, const PoleSequence& poles,
                                        const Problem& problem, int k_max, double scale) {
  std::vector<BoundCurve> out;
  const double bnorm = problem.b.norm();
  for (BoundKind kind : curve.bounds) {
    BoundCurve bc;
    switch (kind) {
      case BoundKind::chebyshev_ellipse:
        bc = polynomial_bound_curve(f, problem.sigma_min, problem.sigma_max, bnorm, k_max, curve.bound_constant);
        break;
      case BoundKind::quasi_optimal_rational:
        bc = quasi_optimal_rational_curve(f, poles, problem.sigma_min, problem.sigma_max, bnorm, k_max);
        break;
      case BoundKind::shift_invert:
        bc = shift_invert_bound_curve(f, problem.sigma_min, problem.sigma_max, constant_pole(poles, curve.label), bnorm,
                                      k_max, curve.bound_constant);
        break;
    }
    const bool rate_only = !curve.bound_constant && kind != BoundKind::quasi_optimal_rational;
    if (!rate_only && scale != 1.0)
      for (double& v : bc.values.value) v /= scale;
    bc.constants["scale"] = rate_only ? 1.0 : scale;
    out.push_back(std::move(bc));
  }
  return out;
}

std::string stop_name(StopReason stop) {
  return stop == StopReason::reached_k_max ? "reached_k_max" : "invariant_subspace";
}

json finite_constants(const std::map<std::string, double>& constants) {
  json out = json::object();
  for (const auto& [key, value] : constants)
    if (std::isfinite(value)) out[key] = value;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << text;
  if (!out) throw IoFailure("error writing " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create output directory " + dir.string() + ": " + ec.message());
}

ExperimentResult execute(const ExperimentConfig& config, bool with_runs, bool write_outputs) {
  const ScalarFunction f = builtin(config.function);
  const Problem problem = build_problem(config);

  ExperimentResult result;
  result.sigma_min = problem.sigma_min;
  result.sigma_max = problem.sigma_max;

  std::optional<Vector> reference;
  double scale = 1.0;
  if (with_runs) {
    reference = gmf_apply_reference(f, problem.op.dense(), problem.b);
    scale = reference->norm();
    if (!(scale > 0.0)) scale = 1.0;
  }

  for (const CurveSpec& curve : config.curves) {
    const PoleSequence poles = build_poles(curve, config, problem.sigma_min, problem.sigma_max);
    CurveResult cr;
    cr.label = curve.label;
    if (with_runs) {
      cr.run = curve.transpose ? gmf_via_transpose(f, problem.op, problem.b, curve.method, poles, config.k_max,
                                                   reference, curve.reorthogonalize)
                               : krylov_approximate(curve.method, f, problem.op, problem.b, poles, config.k_max,
                                                    reference, curve.reorthogonalize);
    }
    cr.bounds = evaluate_bounds(curve, f, poles, problem, config.k_max, scale);
    result.curves.push_back(std::move(cr));
  }

  if (with_runs) {
    for (const auto& [a, b] : config.differences) {
      const KrylovRun* ra = nullptr;
      const KrylovRun* rb = nullptr;
      for (const auto& c : result.curves) {
        if (c.label == a) ra = &c.run;
        if (c.label == b) rb = &c.run;
      }
      Series diff;
      const int steps = std::min(ra->steps(), rb->steps());
      for (int k = 0; k < steps; ++k)
        diff.push(k + 1, relative_error(ra->iterates[std::size_t(k)], rb->iterates[std::size_t(k)]));
      result.differences.emplace_back(a + "." + b, std::move(diff));
    }
  }

  if (!write_outputs) return result;

  prepare_dir(config.output_dir);
  json manifest;
  manifest["library"] = "gmf";
  manifest["version"] = GMF_VERSION;
  manifest["mode"] = with_runs ? "run" : "bounds";
  manifest["config"] = json::parse(config.canonical_json);
  manifest["sigma"] = {{"min", problem.sigma_min}, {"max", problem.sigma_max}};
  manifest["bound_scale"] = with_runs ? "relative to ||f(A) b||" : "absolute";
  manifest["precision"] = output_precision();
  json curves = json::array();
  auto emit = [&](const Series& s, const std::string& file) {
    const auto path = config.output_dir / file;
    emit_dat(s, path);
    result.files.push_back(path);
    return file;
  };
  for (const auto& cr : result.curves) {
    json entry;
    entry["label"] = cr.label;
    json files = json::array();
    if (with_runs) {
      entry["steps"] = cr.run.steps();
      entry["stop"] = stop_name(cr.run.stop);
      if (!cr.run.trace.error.empty()) entry["final_error"] = cr.run.trace.error.value.back();
      files.push_back(emit(cr.run.trace.error, cr.label + ".error.dat"));
      if (!cr.run.trace.orthogonality_drift.empty())
        files.push_back(emit(cr.run.trace.orthogonality_drift, cr.label + ".drift.dat"));
    }
    json bounds = json::array();
    for (const auto& bc : cr.bounds) {
      const std::string file = emit(bc.values, cr.label + ".bound." + bc.name + ".dat");
      files.push_back(file);
      bounds.push_back({{"name", bc.name}, {"file", file}, {"constants", finite_constants(bc.constants)}});
    }
    entry["bounds"] = bounds;
    entry["files"] = files;
    curves.push_back(entry);
  }
  manifest["curves"] = curves;
  json diffs = json::array();
  for (const auto& [name, series] : result.differences)
    diffs.push_back({{"name", name}, {"file", emit(series, "diff." + name + ".dat")}});
  manifest["differences"] = diffs;

  const auto manifest_path = config.output_dir / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  result.files.push_back(manifest_path);
  return result;
}

}  // namespace

BoundKind parse_bound_kind(const std::string& name) {
  if (name == "chebyshev_ellipse") return BoundKind::chebyshev_ellipse;
  if (name == "quasi_optimal_rational") return BoundKind::quasi_optimal_rational;
  if (name == "shift_invert") return BoundKind::shift_invert;
  throw InvalidArgument("unknown bound '" + name +
                        "' (expected chebyshev_ellipse, quasi_optimal_rational or shift_invert)");
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::chebyshev_ellipse: return "chebyshev_ellipse";
    case BoundKind::quasi_optimal_rational: return "quasi_optimal_rational";
    case BoundKind::shift_invert: return "shift_invert";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::parse(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: malformed JSON: ") + e.what());
  }
  require_object(j, "config");
  reject_unknown(j, {"name", "matrix", "vector", "function", "k_max", "output_dir", "curves", "differences"}, "");

  ExperimentConfig cfg;
  cfg.name = get_string(require(j, "name", ""), "name");
  if (!safe_label(cfg.name)) throw InvalidArgument("config: 'name' may only contain letters, digits, '_', '-' and '.'");
  cfg.matrix = parse_matrix(require(j, "matrix", ""), base_dir);
  cfg.vector = j.contains("vector") ? parse_vector(j["vector"], base_dir) : VectorSpec{};
  cfg.function = get_string(require(j, "function", ""), "function");
  (void)builtin(cfg.function);
  const auto k_max = get_integer(require(j, "k_max", ""), "k_max");
  if (k_max < 1 || k_max > 100000) throw InvalidArgument("config: 'k_max' must be a positive integer");
  cfg.k_max = int(k_max);
  cfg.output_dir = j.contains("output_dir") ? resolve(base_dir, get_string(j["output_dir"], "output_dir"))
                                            : std::filesystem::path("results") / cfg.name;

  const json& curves = require(j, "curves", "");
  if (!curves.is_array() || curves.empty()) throw InvalidArgument("config: 'curves' must be a nonempty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    cfg.curves.push_back(parse_curve(curves[i], i, base_dir));
    if (!labels.insert(cfg.curves.back().label).second)
      throw InvalidArgument("config: duplicate curve label '" + cfg.curves.back().label + "'");
  }
  if (j.contains("differences")) {
    const json& diffs = j["differences"];
    if (!diffs.is_array()) throw InvalidArgument("config: 'differences' must be an array of label pairs");
    for (const auto& pair : diffs) {
      if (!pair.is_array() || pair.size() != 2) throw InvalidArgument("config: each difference must be [label, label]");
      const std::string a = get_string(pair[0], "differences[][0]");
      const std::string b = get_string(pair[1], "differences[][1]");
      if (!labels.count(a) || !labels.count(b))
        throw InvalidArgument("config: difference refers to unknown curve '" + (labels.count(a) ? b : a) + "'");
      cfg.differences.emplace_back(a, b);
    }
  }
  cfg.canonical_json = j.dump();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.parent_path());
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_outputs) {
  return execute(config, true, write_outputs);
}

ExperimentResult run_bounds(const ExperimentConfig& config, bool write_outputs) {
  return execute(config, false, write_outputs);
}

int output_precision() {
  const char* env = std::getenv("GMF_PRECISION");
  if (env == nullptr || *env == '\0') return 16;
  char* end = nullptr;
  const long digits = std::strtol(env, &end, 10);
  if (*end != '\0' || digits < 1 || digits > 17)
    throw InvalidArgument(std::string("GMF_PRECISION must be an integer in [1, 17], got '") + env + "'");
  return int(digits);
}

std::string format_dat(const Series& series, int digits) {
  if (digits < 1 || digits > 17) throw InvalidArgument("format_dat: digits must be in [1, 17]");
  std::string out;
  char line[64];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(line, sizeof line, "%d %.*e\n", series.k[i], digits - 1, series.value[i]);
    out += line;
  }
  return out;
}

void emit_dat(const Series& series, const std::filesystem::path& path, int digits) {
  write_text(path, format_dat(series, digits));
}

Series parse_dat(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  Series series;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    int k = 0;
    std::string token, extra;
    if (!(fields >> k >> token) || (fields >> extra))
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected 'k value'");
    double value = 0.0;
    try {
      value = std::stod(token);
    } catch (const std::exception&) {
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": bad value '" + token + "'");
    }
    series.push(k, value);
  }
  return series;
}

std::string summarize(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream out;
  out << config.name << ": f = " << config.function << ", sigma in [" << result.sigma_min << ", "
      << result.sigma_max << "], k_max = " << config.k_max << "\n";
  out << std::left << std::setw(20) << "curve" << std::setw(8) << "steps" << std::setw(14) << "final error"
      << "stop\n";
  for (const auto& c : result.curves) {
    out << std::left << std::setw(20) << c.label << std::setw(8) << c.run.steps() << std::setw(14);
    if (c.run.trace.error.empty()) {
      out << "-";
    } else {
      std::ostringstream e;
      e << std::scientific << std::setprecision(3) << c.run.trace.error.value.back();
      out << e.str();
    }
    out << stop_name(c.run.stop) << "\n";
    for (const auto& b : c.bounds) {
      if (b.values.empty()) continue;
      std::ostringstream e;
      e << std::scientific << std::setprecision(3) << b.values.value.back();
      out << "  bound " << b.name << " at k = " << b.values.k.back() << ": " << e.str() << "\n";
    }
  }
  for (const auto& [name, series] : result.differences) {
    if (series.empty()) continue;
    std::ostringstream e;
    e << std::scientific << std::setprecision(3) << series.value.back();
    out << "difference " << name << " at k = " << series.k.back() << ": " << e.str() << "\n";
  }
  return out.str();
}

}  // namespace gmf
