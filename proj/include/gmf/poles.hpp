#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gmf {

inline constexpr double infinite_pole = std::numeric_limits<double>::infinity();

enum class PoleProvenance { polynomial, extended, shift_invert, user_file, explicit_list };

/// Closed interval [lo, hi] known to contain the spectrum of A^T A.
struct SpectralInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/**
 * Ordered poles xi_1, xi_2, ... on the A^T A side, each finite or infinite.
 * Pole xi_j is used to build the (j+1)-th basis vector.
 */
struct PoleSequence {
  std::vector<double> poles;
  PoleProvenance provenance = PoleProvenance::explicit_list;

  std::size_t size() const noexcept { return poles.size(); }
  /// xi_j for j >= 1; sequences shorter than needed repeat their last pole.
  double at(std::size_t j) const;
  /// First `count` poles (with repetition of the last one as in at()).
  std::vector<double> first(std::size_t count) const;
};

bool is_infinite(double pole) noexcept;

PoleSequence polynomial_poles(int k);
/// (inf, 0, inf, 0, ...) of length k.
PoleSequence extended_poles(int k);
/// k copies of -sigma_min * sigma_max.
PoleSequence si_optimal_pole(double sigma_min, double sigma_max, int k);
PoleSequence explicit_poles(std::vector<double> poles);

/**
 * One pole per line: "inf", "0", or a decimal. Blank lines and '#'
 * comments are ignored. With an interval, finite poles inside it are rejected.
 */
PoleSequence load_user_poles(const std::filesystem::path& path,
                             const std::optional<SpectralInterval>& gram_spectrum = std::nullopt);

/// Throws InvalidArgument if a finite pole lies inside the interval.
void validate_poles(const PoleSequence& poles, const SpectralInterval& gram_spectrum);

std::string to_string(PoleProvenance provenance);

}  // namespace gmf
