#pragma once

#include <map>
#include <memory>
#include <vector>

#include "krylov/spectrum.hpp"

namespace krylov {

// Error bounds for the randomized block Krylov estimate of lambda_max.
//
// Every bound is stated for a partition q = q1 + q2 of the depth and enters
// the spectrum only through srk(q1) (and the gap gamma). Values are formed in
// log space and exponentiated once; the clamp at 1 is applied last.

/// P[err >= eps] <= 1 ∧ √2 [8 srk(q1) e^{-2(2 q2 + 1)√eps}]^{ell/2}, eps in [0, 1].
double prob_bound_gapfree(double srk_q1, int ell, int q2, double eps);

/// E err <= 1 ∧ [(2.70/ell + log(8 srk(q1))) / (2(2 q2 + 1))]^2.
double expect_bound_gapfree(double srk_q1, int ell, int q2);

/// P[err >= eps] <= 1 ∧ √2 [8 srk(q1)/eps · e^{-4 q2 √gamma}]^{ell/2}, eps in (0, 1].
double prob_bound_gap(double srk_q1, int ell, int q2, double eps, double gamma);

/// log F with F = 4 srk(q1) e^{-4 q2 √gamma}.
double log_gap_factor(double srk_q1, int q2, double gamma);

/// Expectation bound through F: F/((ell-2)+F) for ell >= 3,
/// (F/2) log(1 + 2/F) for ell = 2, 1 ∧ √(2πF) for ell = 1.
double expect_bound_gap(double srk_q1, int ell, int q2, double gamma);

/// srk(nu) at integer nu, either computed from a spectrum or looked up in
/// a user-supplied table. Tabulated profiles refuse missing nu rather than
/// interpolate.
class SrkProfile {
 public:
  static SrkProfile from_spectrum(Spectrum s);
  static SrkProfile from_table(std::map<int, double> table);

  /// Throws std::out_of_range for a nu absent from a table.
  double at(int nu) const;
  bool has(int nu) const;

 private:
  std::shared_ptr<const Spectrum> spectrum_;
  std::map<int, double> table_;
};

struct PartitionBounds {
  int q1 = 0;
  int q2 = 0;
  double srk_q1 = 0.0;
  double prob_gapfree = 1.0;
  double expect_gapfree = 1.0;
  double prob_gap = 1.0;
  double expect_gap = 1.0;
  double gap_factor = 0.0;  // F
};

struct BestValue {
  double value = 1.0;
  int q1 = 0;  // partition attaining the value (first in sweep order)
};

struct BoundReport {
  int ell = 1;
  int q = 0;
  double eps = 0.0;
  double gamma = 0.0;
  std::vector<PartitionBounds> partitions;  // q1 = 0 .. q

  BestValue best_prob_gapfree;
  BestValue best_expect_gapfree;
  BestValue best_prob_gap;
  BestValue best_expect_gap;
  /// min over the gap-free and gap families
  double best_probability = 1.0;
  double best_expectation = 1.0;
};

/// Sweeps every partition q1 + q2 = q. eps = 0 is allowed; the gap
/// probability bound, undefined there, is reported as the trivial value 1.
BoundReport best_bound(const SrkProfile& srk, double gamma, int ell, int q, double eps);

// Depth q2 beyond which the bounds reach eps (real-valued; callers ceil).
double depth_threshold_gapfree(double srk_q1, int ell, double eps);
double depth_threshold_gap(double srk_q1, int ell, double eps, double gamma);
double depth_threshold_gap_expect(double srk_q1, int ell, double eps, double gamma);

struct ThresholdRow {
  int q1 = 0;
  double srk_q1 = 0.0;
  double q2_gapfree = 0.0;
  double q2_gap = 0.0;
  double q2_prime_gap = 0.0;
};

struct DepthThresholds {
  int ell = 1;
  double eps = 0.0;
  double gamma = 0.0;
  std::vector<ThresholdRow> rows;  // q1 = 0 .. q1_max
  // Smallest total depth q1 + max(0, ceil(q2)) over the q1 grid.
  BestValue best_total_gapfree;
  BestValue best_total_gap;
  BestValue best_total_prime_gap;
  /// ell = 2 expectation threshold is only claimed for small eps.
  bool outside_stated_validity = false;
};

/// Throws std::domain_error when gamma == 0 or eps is outside (0, 1].
DepthThresholds depth_thresholds(const SrkProfile& srk, double gamma, int ell,
                                 double eps, int q1_max);

}  // namespace krylov
