#include "krylov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "krylov/errors.hpp"
#include "krylov/format.hpp"

namespace krylov {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("spectrum must contain at least one value");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("spectrum contains a non-finite value");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

bool Spectrum::is_identity_multiple() const noexcept {
  return range() <= 1e-14 * std::max(1.0, std::abs(max()));
}

SpectralFeatures spectral_features(const Spectrum& s, double tie_tol) {
  SpectralFeatures f;
  f.rho = s.range();
  f.is_identity_multiple = s.is_identity_multiple();
  if (f.is_identity_multiple) {
    f.multiplicity_max = s.size();
    f.gamma = 0.0;
    return f;
  }
  const double cutoff = s.max() - tie_tol * f.rho;
  std::size_t m = 1;
  while (m < s.size() && s[m] >= cutoff) ++m;
  f.multiplicity_max = m;
  // m < n always holds here because a_min < cutoff once rho > 0 and
  // tie_tol < 1.
  const double next = m < s.size() ? s[m] : s.min();
  f.gamma = std::clamp((s.max() - next) / f.rho, 0.0, 1.0);
  return f;
}

double spectral_gap(const Spectrum& s, double tie_tol) {
  return spectral_features(s, tie_tol).gamma;
}

double stable_rank(const Spectrum& s, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("stable_rank: nu must be >= 0");
  if (s.is_identity_multiple()) return 0.0;
  const double lo = s.min();
  const double rho = s.range();
  const double exponent = 2.0 * nu;
  double sum = 0.0;
  double comp = 0.0;
  for (double a : s.values()) {
    // std::pow(0, 0) == 1 gives the nu == 0 convention for free.
    const double term = std::pow((a - lo) / rho, exponent);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double relative_error(const Spectrum& s, double xi) {
  if (s.is_identity_multiple()) {
    throw std::domain_error("undefined relative error: spectral range is zero");
  }
  return (s.max() - xi) / s.range();
}

Spectrum affine_map(const Spectrum& s, double alpha, double beta) {
  std::vector<double> out;
  out.reserve(s.size());
  for (double a : s.values()) out.push_back(alpha * a + beta);
  return Spectrum(std::move(out));
}

Spectrum read_spectrum(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw ConfigError("spectrum line " + std::to_string(lineno) +
                        ": not a finite decimal value: '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("spectrum file contains no values");
  return Spectrum(std::move(values));
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum file " + path.string());
  return read_spectrum(in);
}

void write_spectrum(std::ostream& out, const Spectrum& s) {
  for (double v : s.values()) out << format_double(v) << '\n';
}

void save_spectrum(const std::filesystem::path& path, const Spectrum& s) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write spectrum file " + path.string());
  write_spectrum(out, s);
}

}  // namespace krylov
