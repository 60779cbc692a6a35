#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "gmf/errors.hpp"
#include "gmf/harness.hpp"

using namespace gmf;

namespace {

const char* small_config = R"({
  "name": "small",
  "matrix": {"m": 30, "n": 20, "profile": "chebyshev2", "interval": [0.1, 10], "seed": 1},
  "vector": {"seed": 2},
  "function": "sqrt",
  "k_max": 8,
  "curves": [
    {"label": "gk", "method": "golub_kahan", "reorthogonalize": true, "bounds": ["chebyshev_ellipse"]},
    {"label": "si", "method": "rational_full", "poles": {"kind": "shift_invert"},
     "bounds": ["shift_invert", "quasi_optimal_rational"]},
    {"label": "si_short", "method": "rational_short", "poles": {"kind": "shift_invert"}}
  ],
  "differences": [["si_short", "si"]]
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST(Harness, DatFormat) {
  Series s;
  s.push(1, 0.5);
  EXPECT_EQ(format_dat(s, 16), "1 5.000000000000000e-01\n");
  EXPECT_EQ(format_dat(Series{}, 16), "");
}

TEST(Harness, DatRoundTrip) {
  Series s;
  s.push(1, 0.1);
  s.push(4, 3.0e-12);
  const auto path = std::filesystem::temp_directory_path() / "gmf_roundtrip.dat";
  emit_dat(s, path, 17);
  const Series back = parse_dat(path);
  EXPECT_EQ(back.k, s.k);
  EXPECT_EQ(back.value, s.value);
  emit_dat(Series{}, path);
  EXPECT_TRUE(slurp(path).empty());
}

TEST(Harness, ConfigValidation) {
  EXPECT_NO_THROW(ExperimentConfig::parse(small_config));
  EXPECT_THROW(ExperimentConfig::parse(replaced(small_config, "\"k_max\": 8", "\"k_max\": 0")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::parse(replaced(small_config, "\"k_max\"", "\"kmax\"")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::parse(replaced(small_config, "\"sqrt\"", "\"cosh\"")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::parse(replaced(small_config, "golub_kahan", "lanczos")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::parse("{not json"), InvalidArgument);
}

TEST(Harness, RunWritesTracesAndManifest) {
  ExperimentConfig cfg = ExperimentConfig::parse(small_config);
  cfg.output_dir = std::filesystem::temp_directory_path() / "gmf_harness_run";
  std::filesystem::remove_all(cfg.output_dir);
  const ExperimentResult r = run_experiment(cfg);
  ASSERT_EQ(r.curves.size(), 3u);
  EXPECT_NEAR(r.sigma_min, 0.1, 1e-12);
  EXPECT_NEAR(r.sigma_max, 10.0, 1e-12);
  EXPECT_EQ(r.files.back().filename(), "manifest.json");
  EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "gk.error.dat"));
  EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "si.bound.shift_invert.dat"));
  EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "diff.si_short.si.dat"));
  EXPECT_EQ(parse_dat(cfg.output_dir / "gk.error.dat").size(), 8u);
  EXPECT_FALSE(summarize(cfg, r).empty());
}

TEST(Harness, RunsAreByteIdentical) {
  ExperimentConfig cfg = ExperimentConfig::parse(small_config);
  const auto root = std::filesystem::temp_directory_path() / "gmf_harness_determinism";
  std::filesystem::remove_all(root);
  cfg.output_dir = root / "a";
  const auto first = run_experiment(cfg).files;
  cfg.output_dir = root / "b";
  const auto second = run_experiment(cfg).files;
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(slurp(first[i]), slurp(second[i])) << first[i];
}

TEST(Harness, BoundsOnlyMode) {
  ExperimentConfig cfg = ExperimentConfig::parse(small_config);
  const ExperimentResult r = run_bounds(cfg, false);
  std::size_t count = 0;
  for (const auto& c : r.curves) count += c.bounds.size();
  EXPECT_EQ(count, 3u);
  for (const auto& c : r.curves) EXPECT_TRUE(c.run.iterates.empty());
}
