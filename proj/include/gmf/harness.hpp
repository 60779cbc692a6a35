#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmf/bounds.hpp"
#include "gmf/operator_core.hpp"
#include "gmf/rectangular.hpp"
#include "gmf/trace.hpp"

namespace gmf {

/// Either a synthesized test matrix or a matrix file.
struct MatrixSpec {
  Index m = 0;
  Index n = 0;
  ProfileKind profile = ProfileKind::chebyshev2;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> file;
};

/// Either a Gaussian vector drawn from `seed` or a vector file.
struct VectorSpec {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> file;
};

enum class BoundKind { chebyshev_ellipse, quasi_optimal_rational, shift_invert };

BoundKind parse_bound_kind(const std::string& name);
std::string to_string(BoundKind kind);

/// kind: polynomial | extended | shift_invert | explicit | file.
struct PoleSpec {
  std::string kind = "polynomial";
  std::vector<double> values;
  std::optional<std::filesystem::path> file;
};

struct CurveSpec {
  std::string label;
  KrylovMethod method = KrylovMethod::golub_kahan;
  bool transpose = false;  // run on A^T and map back by least squares
  PoleSpec poles;
  bool reorthogonalize = false;
  std::vector<BoundKind> bounds;
  bool bound_constant = true;
};

/**
 * JSON experiment description. Schema (keys not listed are rejected):
 *
 *   name        string, used for the output directory when none is given
 *   matrix      {m, n, profile: chebyshev2|logspace, interval: [lo, hi], seed} or {file}
 *   vector      {seed} or {file}
 *   function    builtin function name
 *   k_max       positive integer
 *   output_dir  optional, relative to the config file
 *   curves      [{label, method, transpose?, poles?, reorthogonalize?, bounds?, bound_constant?}]
 *   differences optional [[label_a, label_b], ...]
 *
 * method is golub_kahan, rational_full, rational_short or transpose_trick
 * (shorthand for rational_full with transpose = true). poles is
 * {kind, values?, file?}; rational methods require it.
 */
struct ExperimentConfig {
  std::string name;
  MatrixSpec matrix;
  VectorSpec vector;
  std::string function;
  int k_max = 0;
  std::vector<CurveSpec> curves;
  std::vector<std::pair<std::string, std::string>> differences;
  std::filesystem::path output_dir;
  std::string canonical_json;  // normalized copy of the input, echoed into the manifest

  static ExperimentConfig parse(const std::string& json_text, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct CurveResult {
  std::string label;
  KrylovRun run;
  std::vector<BoundCurve> bounds;
};

struct ExperimentResult {
  std::vector<CurveResult> curves;
  std::vector<std::pair<std::string, Series>> differences;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  std::vector<std::filesystem::path> files;  // written outputs, manifest last
};

/**
 * Runs every curve against the SVD oracle, evaluates the requested bounds,
 * and (when write_outputs) writes one .dat per series plus manifest.json
 * into config.output_dir.
 */
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_outputs = true);

/// Bound curves only; no Krylov runs and no oracle.
ExperimentResult run_bounds(const ExperimentConfig& config, bool write_outputs = true);

/// Significant digits for .dat values: GMF_PRECISION (1..17), default 16.
int output_precision();

/// Writes "k value" lines, LF terminated, values with `digits` significant digits.
void emit_dat(const Series& series, const std::filesystem::path& path, int digits = output_precision());
std::string format_dat(const Series& series, int digits = output_precision());
Series parse_dat(const std::filesystem::path& path);

/// Human-readable summary table of a finished experiment.
std::string summarize(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace gmf
