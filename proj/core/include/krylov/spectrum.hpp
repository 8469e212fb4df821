#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace krylov {

inline constexpr double kDefaultTieTol = 1e-12;

/// Eigenvalues of a symmetric matrix, stored weakly decreasing.
///
/// Construction sorts and validates the input; a Spectrum is immutable
/// afterwards and safe to share between threads.
class Spectrum {
 public:
  /// Throws std::invalid_argument if `values` is empty or has a non-finite
  /// entry. Values need not be sorted.
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double max() const noexcept { return values_.front(); }
  double min() const noexcept { return values_.back(); }
  double range() const noexcept { return values_.front() - values_.back(); }

  /// True when the spectral range is negligible: rho <= 1e-14 * max(1, |a_max|).
  bool is_identity_multiple() const noexcept;

 private:
  std::vector<double> values_;
};

struct SpectralFeatures {
  double rho = 0.0;
  double gamma = 0.0;
  std::size_t multiplicity_max = 1;
  bool is_identity_multiple = false;
};

SpectralFeatures spectral_features(const Spectrum& s,
                                   double tie_tol = kDefaultTieTol);

/// Relative gap between a_max and the next distinct eigenvalue. Entries
/// within tie_tol * rho of a_max are counted as ties. Zero for identity
/// multiples.
double spectral_gap(const Spectrum& s, double tie_tol = kDefaultTieTol);

/// srk(nu) = sum_i ((a_i - a_min) / rho)^(2 nu), accumulated with Neumaier
/// compensation. Terms at a_min contribute 1 when nu == 0 and 0 otherwise;
/// identity multiples give 0.
double stable_rank(const Spectrum& s, double nu);

/// (a_max - xi) / rho. Throws std::domain_error for identity multiples.
double relative_error(const Spectrum& s, double xi);

/// Spectrum of alpha*A + beta*I.
Spectrum affine_map(const Spectrum& s, double alpha, double beta);

/// Text format: one ASCII decimal eigenvalue per line. Blank lines and lines
/// starting with '#' are skipped. Throws ConfigError on malformed input.
Spectrum read_spectrum(std::istream& in);
Spectrum load_spectrum(const std::filesystem::path& path);

/// Writes values in stored (decreasing) order with 17 significant digits.
void write_spectrum(std::ostream& out, const Spectrum& s);
void save_spectrum(const std::filesystem::path& path, const Spectrum& s);

}  // namespace krylov
