#include "krylov/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "krylov/errors.hpp"
#include "krylov/rng.hpp"

namespace krylov {

void EnsembleSpec::validate() const {
  if (n < 2) throw std::invalid_argument("ensemble dimension must be >= 2");
  const bool gapped = kind == EnsembleKind::gapped_goe || kind == EnsembleKind::gapped_power_law;
  if (gapped && !(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("ensemble gap must lie in [0, 1)");
  }
  if (kind == EnsembleKind::gapped_goe && !(gamma > 0.0)) {
    throw std::invalid_argument("gapped GOE needs gamma in (0, 1)");
  }
  if (kind == EnsembleKind::gapped_power_law && !(power > 0.0 && std::isfinite(power))) {
    throw std::invalid_argument("power law order must be > 0");
  }
}

bool EnsembleSpec::is_random() const noexcept {
  return kind == EnsembleKind::goe || kind == EnsembleKind::gapped_goe;
}

EnsembleKind parse_ensemble_kind(const std::string& raw) {
  std::string name = raw;
  std::replace(name.begin(), name.end(), '_', '-');
  if (name == "goe") return EnsembleKind::goe;
  if (name == "gapped-goe") return EnsembleKind::gapped_goe;
  if (name == "power-law" || name == "gapped-power-law") return EnsembleKind::gapped_power_law;
  if (name == "laplacian" || name == "laplacian-1d") return EnsembleKind::laplacian_1d;
  if (name == "inverse-laplacian" || name == "inverse-laplacian-1d") {
    return EnsembleKind::inverse_laplacian_1d;
  }
  throw ConfigError("unknown ensemble '" + raw + "'");
}

std::string ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::goe: return "goe";
    case EnsembleKind::gapped_goe: return "gapped_goe";
    case EnsembleKind::gapped_power_law: return "gapped_power_law";
    case EnsembleKind::laplacian_1d: return "laplacian_1d";
    case EnsembleKind::inverse_laplacian_1d: return "inverse_laplacian_1d";
  }
  return "unknown";
}

Spectrum goe_spectrum(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("GOE dimension must be >= 2");
  const Eigen::MatrixXd g = gaussian_matrix(n, n, derive_key(seed, {0x60E}));
  const Eigen::MatrixXd w = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("GOE eigensolve did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const double lo = ev(0);
  const double hi = ev(n - 1);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = (ev(i) - lo) / (hi - lo);
  values.front() = 0.0;
  values.back() = 1.0;
  return Spectrum(std::move(values));
}

Spectrum gapped_goe_spectrum(int n, double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gapped GOE needs gamma in (0, 1)");
  }
  const Spectrum base = goe_spectrum(n, seed);
  std::vector<double> values(base.values().begin(), base.values().end());
  // With a_min = 0: (a_1 - a_2)/a_1 = gamma  <=>  a_1 = a_2 / (1 - gamma).
  values.front() = values[1] / (1.0 - gamma);
  return Spectrum(std::move(values));
}

Spectrum gapped_power_law_spectrum(int n, double p, double gamma) {
  if (n < 2) throw std::invalid_argument("power law dimension must be >= 2");
  if (!(p > 0.0)) throw std::invalid_argument("power law order must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gap must lie in [0, 1)");
  std::vector<double> values(static_cast<std::size_t>(n));
  values[0] = 1.0 + gamma / (1.0 - gamma);
  for (int i = 2; i <= n; ++i) {
    values[static_cast<std::size_t>(i - 1)] = std::pow(static_cast<double>(i - 1), -1.0 / p);
  }
  return Spectrum(std::move(values));
}

LaplacianSpectra laplacian_spectra(int n) {
  if (n < 2) throw std::invalid_argument("Laplacian dimension must be >= 2");
  const double h = 1.0 / (n + 1.0);
  std::vector<double> lap(static_cast<std::size_t>(n));
  std::vector<double> inv(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const double v = (2.0 / (h * h)) * (1.0 + std::cos(std::numbers::pi * j * h));
    lap[static_cast<std::size_t>(j - 1)] = v;
    inv[static_cast<std::size_t>(j - 1)] = 1.0 / v;
  }
  return {Spectrum(std::move(lap)), Spectrum(std::move(inv))};
}

Spectrum generate_spectrum(const EnsembleSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case EnsembleKind::goe: return goe_spectrum(spec.n, spec.seed);
    case EnsembleKind::gapped_goe: return gapped_goe_spectrum(spec.n, spec.gamma, spec.seed);
    case EnsembleKind::gapped_power_law:
      return gapped_power_law_spectrum(spec.n, spec.power, spec.gamma);
    case EnsembleKind::laplacian_1d: return laplacian_spectra(spec.n).laplacian;
    case EnsembleKind::inverse_laplacian_1d: return laplacian_spectra(spec.n).inverse;
  }
  throw std::invalid_argument("unknown ensemble kind");
}

std::string spectrum_file_name(const EnsembleSpec& spec) {
  std::ostringstream name;
  name << ensemble_kind_name(spec.kind) << "_n" << spec.n;
  if (spec.kind == EnsembleKind::gapped_goe || spec.kind == EnsembleKind::gapped_power_law) {
    name << "_gamma" << spec.gamma;
  }
  if (spec.kind == EnsembleKind::gapped_power_law) name << "_p" << spec.power;
  if (spec.is_random()) name << "_seed" << spec.seed;
  name << ".txt";
  return name.str();
}

}  // namespace krylov
