#pragma once

#include <stdexcept>
#include <string>

namespace gmf {

/// Failure categories; the CLI maps these onto distinct exit codes.
enum class ErrorCategory {
  invalid_argument,
  dimension_mismatch,
  solver_failure,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::invalid_argument, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCategory::dimension_mismatch, what) {}
};

class SolverFailure : public Error {
 public:
  explicit SolverFailure(const std::string& what)
      : Error(ErrorCategory::solver_failure, what) {}
};

class IoFailure : public Error {
 public:
  explicit IoFailure(const std::string& what)
      : Error(ErrorCategory::io_failure, what) {}
};

}  // namespace gmf
