#include "gmf/poles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gmf/errors.hpp"

namespace gmf {

bool is_infinite(double pole) noexcept { return std::isinf(pole); }

double PoleSequence::at(std::size_t j) const {
  if (j == 0) throw InvalidArgument("pole indices start at 1");
  if (poles.empty()) throw InvalidArgument("pole sequence is empty");
  return j <= poles.size() ? poles[j - 1] : poles.back();
}

std::vector<double> PoleSequence::first(std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) out.push_back(at(j));
  return out;
}

PoleSequence polynomial_poles(int k) {
  if (k < 1) throw InvalidArgument("polynomial_poles: k must be >= 1");
  return {std::vector<double>(std::size_t(k), infinite_pole), PoleProvenance::polynomial};
}

PoleSequence extended_poles(int k) {
  if (k < 1) throw InvalidArgument("extended_poles: k must be >= 1");
  PoleSequence seq{{}, PoleProvenance::extended};
  for (int j = 0; j < k; ++j) seq.poles.push_back(j % 2 == 0 ? infinite_pole : 0.0);
  return seq;
}

PoleSequence si_optimal_pole(double sigma_min, double sigma_max, int k) {
  if (k < 1) throw InvalidArgument("si_optimal_pole: k must be >= 1");
  if (!(sigma_min > 0.0) || !(sigma_min <= sigma_max) || !std::isfinite(sigma_max))
    throw InvalidArgument("si_optimal_pole: need 0 < sigma_min <= sigma_max");
  return {std::vector<double>(std::size_t(k), -sigma_min * sigma_max), PoleProvenance::shift_invert};
}

PoleSequence explicit_poles(std::vector<double> poles) {
  for (double xi : poles)
    if (std::isnan(xi)) throw InvalidArgument("poles must not be NaN");
  return {std::move(poles), PoleProvenance::explicit_list};
}

void validate_poles(const PoleSequence& poles, const SpectralInterval& gram_spectrum) {
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const double xi = poles.poles[j];
    if (std::isfinite(xi) && xi >= gram_spectrum.lo && xi <= gram_spectrum.hi) {
      std::ostringstream msg;
      msg << "pole " << j + 1 << " = " << xi << " lies inside the spectral interval [" << gram_spectrum.lo << ", "
          << gram_spectrum.hi << "]";
      throw InvalidArgument(msg.str());
    }
  }
}

PoleSequence load_user_poles(const std::filesystem::path& path, const std::optional<SpectralInterval>& gram_spectrum) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open pole file " + path.string());
  PoleSequence seq{{}, PoleProvenance::user_file};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token, extra;
    if (!(tokens >> token)) continue;
    if (tokens >> extra) throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": one pole per line");
    if (token == "inf" || token == "+inf" || token == "Inf") {
      seq.poles.push_back(infinite_pole);
      continue;
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(value))
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": cannot parse pole '" + token + "'");
    seq.poles.push_back(value);
  }
  if (seq.poles.empty()) throw InvalidArgument("pole file " + path.string() + " contains no poles");
  if (gram_spectrum) validate_poles(seq, *gram_spectrum);
  return seq;
}

std::string to_string(PoleProvenance provenance) {
  switch (provenance) {
    case PoleProvenance::polynomial: return "polynomial";
    case PoleProvenance::extended: return "extended";
    case PoleProvenance::shift_invert: return "shift_invert";
    case PoleProvenance::user_file: return "user_file";
    case PoleProvenance::explicit_list: return "explicit";
  }
  return "unknown";
}

}  // namespace gmf
