#pragma once

#include <cstdint>
#include <string>

#include "krylov/spectrum.hpp"

namespace krylov {

enum class EnsembleKind {
  goe,
  gapped_goe,
  gapped_power_law,
  laplacian_1d,
  inverse_laplacian_1d,
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::gapped_goe;
  int n = 400;
  double gamma = 0.1;  // gapped kinds
  double power = 1.0;  // gapped_power_law
  std::uint64_t seed = 0;  // GOE kinds

  /// Throws std::invalid_argument on n < 2, gamma outside its range, p <= 0.
  void validate() const;
  bool is_random() const noexcept;
};

/// Parses "goe", "gapped-goe", "power-law", "laplacian", "inverse-laplacian"
/// (underscores accepted too). Throws ConfigError otherwise.
EnsembleKind parse_ensemble_kind(const std::string& name);
std::string ensemble_kind_name(EnsembleKind kind);

/// Eigenvalues of W = (G + G^T)/2 for an n x n standard normal G, mapped
/// affinely onto [0, 1].
Spectrum goe_spectrum(int n, std::uint64_t seed);

/// GOE spectrum whose largest eigenvalue is replaced so that the gap equals
/// gamma; the rest of the spectrum (including a_min = 0) is untouched.
Spectrum gapped_goe_spectrum(int n, double gamma, std::uint64_t seed);

/// a_1 = 1 + gamma/(1 - gamma), a_i = (i - 1)^{-1/p} for i = 2..n.
Spectrum gapped_power_law_spectrum(int n, double p, double gamma);

struct LaplacianSpectra {
  Spectrum laplacian;
  Spectrum inverse;
};

/// lambda_j = (2/h^2)(1 + cos(pi j h)), h = 1/(n + 1), j = 1..n, and the
/// reciprocals.
LaplacianSpectra laplacian_spectra(int n);

Spectrum generate_spectrum(const EnsembleSpec& spec);

/// Cache file name encoding kind, n, parameters and seed, e.g.
/// "gapped_goe_n400_gamma0.1_seed7.txt".
std::string spectrum_file_name(const EnsembleSpec& spec);

}  // namespace krylov
