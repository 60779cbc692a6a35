#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gmf/errors.hpp"
#include "gmf/gmf_reference.hpp"
#include "gmf/harness.hpp"

namespace {

enum ExitCode { ok = 0, other = 1, validation = 2, solver = 3, io = 4 };

int exit_code(const gmf::Error& e) {
  switch (e.category()) {
    case gmf::ErrorCategory::invalid_argument:
    case gmf::ErrorCategory::dimension_mismatch: return validation;
    case gmf::ErrorCategory::solver_failure: return solver;
    case gmf::ErrorCategory::io_failure: return io;
  }
  return other;
}

const char* category_name(const gmf::Error& e) {
  switch (e.category()) {
    case gmf::ErrorCategory::invalid_argument: return "invalid argument";
    case gmf::ErrorCategory::dimension_mismatch: return "dimension mismatch";
    case gmf::ErrorCategory::solver_failure: return "solver failure";
    case gmf::ErrorCategory::io_failure: return "i/o failure";
  }
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized matrix function actions f^(A) b by Krylov projection"};
  app.set_version_flag("--version", std::string("gmf ") + GMF_VERSION);
  app.require_subcommand(1);

  std::string config_path, output_dir;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment config and write traces");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--output", output_dir, "Output directory (overrides the config)");
  run->add_flag("-q,--quiet", quiet, "Do not print the summary table");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the bound curves of a config without running it");
  bounds->add_option("config", config_path, "Experiment config (JSON)")->required();
  bounds->add_option("-o,--output", output_dir, "Output directory (overrides the config)");

  std::string matrix_path, function, vector_path, oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Dense SVD reference f^(A) b");
  oracle->add_option("matrix", matrix_path, "Matrix file: 'm n' then m rows")->required();
  oracle->add_option("function", function, "Builtin function name")->required();
  oracle->add_option("b", vector_path, "Vector file with n entries")->required();
  oracle->add_option("-o,--output", oracle_out, "Write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  try {
    if (*run || *bounds) {
      gmf::ExperimentConfig config = gmf::ExperimentConfig::load(config_path);
      if (!output_dir.empty()) config.output_dir = output_dir;
      if (*run) {
        const auto result = gmf::run_experiment(config);
        if (!quiet) std::cout << gmf::summarize(config, result);
      } else {
        const auto result = gmf::run_bounds(config);
        for (const auto& file : result.files) std::cout << file.string() << "\n";
      }
    } else if (*oracle) {
      const gmf::Matrix a = gmf::load_matrix(matrix_path);
      const gmf::Vector b = gmf::load_vector(vector_path);
      if (b.size() != a.cols())
        throw gmf::DimensionMismatch("b has " + std::to_string(b.size()) + " entries, A has " +
                                     std::to_string(a.cols()) + " columns");
      const gmf::Vector y = gmf::gmf_apply_reference(gmf::builtin(function), a, b);
      std::string text;
      char line[40];
      for (gmf::Index i = 0; i < y.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g\n", y(i));
        text += line;
      }
      if (oracle_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(oracle_out, std::ios::binary);
        if (!(out << text)) throw gmf::IoFailure("cannot write " + oracle_out);
      }
    }
  } catch (const gmf::Error& e) {
    std::cerr << "gmf: " << category_name(e) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "gmf: " << e.what() << "\n";
    return other;
  }
  return ok;
}
