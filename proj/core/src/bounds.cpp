#include "krylov/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace krylov {
namespace {

constexpr double kLn8 = 3.0 * std::numbers::ln2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_common(double srk_q1, int ell, int q2) {
  if (!(srk_q1 >= 0.0) || !std::isfinite(srk_q1)) {
    throw std::domain_error("stable rank must be finite and >= 0");
  }
  if (ell < 1) throw std::domain_error("block size must be >= 1");
  if (q2 < 0) throw std::domain_error("depth q2 must be >= 0");
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gap must lie in [0, 1]");
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

double clamp_exp(double log_value) { return std::min(1.0, std::exp(log_value)); }

void take_min(BestValue& best, double value, int q1) {
  if (value < best.value) best = {value, q1};
}

}  // namespace

double prob_bound_gapfree(double srk_q1, int ell, int q2, double eps) {
  check_common(srk_q1, ell, q2);
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in [0, 1]");
  if (srk_q1 == 0.0) return 0.0;
  const double log_bracket = kLn8 + std::log(srk_q1) - 2.0 * (2.0 * q2 + 1.0) * std::sqrt(eps);
  return clamp_exp(0.5 * std::numbers::ln2 + 0.5 * ell * log_bracket);
}

double expect_bound_gapfree(double srk_q1, int ell, int q2) {
  check_common(srk_q1, ell, q2);
  if (srk_q1 == 0.0) return 0.0;
  const double ratio = (2.70 / ell + kLn8 + std::log(srk_q1)) / (2.0 * (2.0 * q2 + 1.0));
  // Clamped at 0 before squaring: a tabulated srk below 1/8 makes the ratio
  // negative.
  const double r = std::max(0.0, ratio);
  return std::min(1.0, r * r);
}

double prob_bound_gap(double srk_q1, int ell, int q2, double eps, double gamma) {
  check_common(srk_q1, ell, q2);
  check_gamma(gamma);
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in (0, 1]");
  if (srk_q1 == 0.0) return 0.0;
  const double log_bracket =
      kLn8 + std::log(srk_q1) - std::log(eps) - 4.0 * q2 * std::sqrt(gamma);
  return clamp_exp(0.5 * std::numbers::ln2 + 0.5 * ell * log_bracket);
}

double log_gap_factor(double srk_q1, int q2, double gamma) {
  check_common(srk_q1, 1, q2);
  check_gamma(gamma);
  return 2.0 * std::numbers::ln2 + safe_log(srk_q1) - 4.0 * q2 * std::sqrt(gamma);
}

double expect_bound_gap(double srk_q1, int ell, int q2, double gamma) {
  check_common(srk_q1, ell, q2);
  const double log_f = log_gap_factor(srk_q1, q2, gamma);
  if (log_f == kNegInf) return 0.0;
  if (ell >= 3) {
    // F / ((ell - 2) + F) = 1 / (1 + (ell - 2)/F)
    return 1.0 / (1.0 + (ell - 2.0) * std::exp(-log_f));
  }
  if (ell == 2) {
    if (log_f >= std::numbers::ln2) {
      const double f = std::exp(log_f);
      return 0.5 * f * std::log1p(2.0 / f);
    }
    // log(1 + 2/F) = log 2 - log F + log1p(F/2) stays finite for tiny F.
    const double half_f = std::exp(log_f - std::numbers::ln2);
    return half_f * (std::numbers::ln2 - log_f + std::log1p(half_f));
  }
  return clamp_exp(0.5 * (std::log(2.0 * std::numbers::pi) + log_f));
}

SrkProfile SrkProfile::from_spectrum(Spectrum s) {
  SrkProfile p;
  p.spectrum_ = std::make_shared<const Spectrum>(std::move(s));
  return p;
}

SrkProfile SrkProfile::from_table(std::map<int, double> table) {
  for (const auto& [nu, value] : table) {
    if (nu < 0 || !(value >= 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("srk table entries need nu >= 0 and finite srk >= 0");
    }
  }
  SrkProfile p;
  p.table_ = std::move(table);
  return p;
}

bool SrkProfile::has(int nu) const {
  if (nu < 0) return false;
  return spectrum_ != nullptr || table_.count(nu) > 0;
}

double SrkProfile::at(int nu) const {
  if (nu < 0) throw std::out_of_range("srk profile: nu must be >= 0");
  if (spectrum_) return stable_rank(*spectrum_, nu);
  const auto it = table_.find(nu);
  if (it == table_.end()) {
    throw std::out_of_range("srk profile has no entry for nu = " + std::to_string(nu));
  }
  return it->second;
}

BoundReport best_bound(const SrkProfile& srk, double gamma, int ell, int q, double eps) {
  if (q < 0) throw std::domain_error("depth q must be >= 0");
  if (ell < 1) throw std::domain_error("block size must be >= 1");
  check_gamma(gamma);
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in [0, 1]");

  BoundReport report;
  report.ell = ell;
  report.q = q;
  report.eps = eps;
  report.gamma = gamma;
  report.partitions.reserve(static_cast<std::size_t>(q) + 1);
  report.best_prob_gapfree = {std::numeric_limits<double>::infinity(), 0};
  report.best_expect_gapfree = report.best_prob_gapfree;
  report.best_prob_gap = report.best_prob_gapfree;
  report.best_expect_gap = report.best_prob_gapfree;

  for (int q1 = 0; q1 <= q; ++q1) {
    PartitionBounds b;
    b.q1 = q1;
    b.q2 = q - q1;
    b.srk_q1 = srk.at(q1);
    b.prob_gapfree = prob_bound_gapfree(b.srk_q1, ell, b.q2, eps);
    b.expect_gapfree = expect_bound_gapfree(b.srk_q1, ell, b.q2);
    b.prob_gap = eps > 0.0 ? prob_bound_gap(b.srk_q1, ell, b.q2, eps, gamma) : 1.0;
    b.expect_gap = expect_bound_gap(b.srk_q1, ell, b.q2, gamma);
    b.gap_factor = std::exp(log_gap_factor(b.srk_q1, b.q2, gamma));
    take_min(report.best_prob_gapfree, b.prob_gapfree, q1);
    take_min(report.best_expect_gapfree, b.expect_gapfree, q1);
    take_min(report.best_prob_gap, b.prob_gap, q1);
    take_min(report.best_expect_gap, b.expect_gap, q1);
    report.partitions.push_back(b);
  }
  report.best_probability =
      std::min(report.best_prob_gapfree.value, report.best_prob_gap.value);
  report.best_expectation =
      std::min(report.best_expect_gapfree.value, report.best_expect_gap.value);
  return report;
}

double depth_threshold_gapfree(double srk_q1, int ell, double eps) {
  check_common(srk_q1, ell, 0);
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in (0, 1]");
  return -0.5 + (2.70 / ell + kLn8 + safe_log(srk_q1)) / (4.0 * std::sqrt(eps));
}

double depth_threshold_gap(double srk_q1, int ell, double eps, double gamma) {
  check_common(srk_q1, ell, 0);
  check_gamma(gamma);
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in (0, 1]");
  if (gamma == 0.0) throw std::domain_error("gap threshold requires gamma > 0");
  return (0.70 / ell + kLn8 - std::log(eps) + safe_log(srk_q1)) / (4.0 * std::sqrt(gamma));
}

double depth_threshold_gap_expect(double srk_q1, int ell, double eps, double gamma) {
  check_common(srk_q1, ell, 0);
  check_gamma(gamma);
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in (0, 1]");
  if (gamma == 0.0) throw std::domain_error("gap threshold requires gamma > 0");
  const double log4srk = 2.0 * std::numbers::ln2 + safe_log(srk_q1);
  const double log_inv_eps = -std::log(eps);
  double numer = 0.0;
  if (ell >= 3) {
    numer = log4srk + log_inv_eps - std::log(ell - 2.0);
  } else if (ell == 2) {
    numer = log4srk + log_inv_eps + safe_log(log_inv_eps);
  } else {
    numer = log4srk + 2.0 * log_inv_eps + std::log(2.0 * std::numbers::pi);
  }
  return numer / (4.0 * std::sqrt(gamma));
}

DepthThresholds depth_thresholds(const SrkProfile& srk, double gamma, int ell,
                                 double eps, int q1_max) {
  if (q1_max < 0) throw std::domain_error("q1_max must be >= 0");
  if (gamma == 0.0) throw std::domain_error("gap thresholds require gamma > 0");
  DepthThresholds out;
  out.ell = ell;
  out.eps = eps;
  out.gamma = gamma;
  out.outside_stated_validity = ell == 2 && eps > 0.2;
  const double inf = std::numeric_limits<double>::infinity();
  out.best_total_gapfree = out.best_total_gap = out.best_total_prime_gap = {inf, 0};
  auto total = [](int q1, double q2) {
    return q1 + std::max(0.0, std::ceil(q2));
  };
  for (int q1 = 0; q1 <= q1_max; ++q1) {
    ThresholdRow row;
    row.q1 = q1;
    row.srk_q1 = srk.at(q1);
    row.q2_gapfree = depth_threshold_gapfree(row.srk_q1, ell, eps);
    row.q2_gap = depth_threshold_gap(row.srk_q1, ell, eps, gamma);
    row.q2_prime_gap = depth_threshold_gap_expect(row.srk_q1, ell, eps, gamma);
    take_min(out.best_total_gapfree, total(q1, row.q2_gapfree), q1);
    take_min(out.best_total_gap, total(q1, row.q2_gap), q1);
    take_min(out.best_total_prime_gap, total(q1, row.q2_prime_gap), q1);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace krylov
