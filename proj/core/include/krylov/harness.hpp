#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "krylov/generators.hpp"
#include "krylov/spectrum.hpp"

namespace krylov {

enum class ExperimentKind { sample_paths, burn_in, srank_profile, bound_check };

/// Accepts "sample-paths", "burn-in", "srank", "bound-check" (and the
/// underscore spellings). Throws ConfigError otherwise.
ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::sample_paths;
  EnsembleSpec ensemble;
  std::vector<int> block_sizes{1, 2, 3, 4};
  int q_max = 25;
  int trials = 200;
  std::uint64_t base_seed = 0;
  std::vector<double> eps_grid;  // bound_check
  std::vector<int> q_grid;       // bound_check depths; empty means 0..q_max
  std::vector<int> sweep_n;      // burn_in / srank series over n
  std::vector<double> sweep_p;   // burn_in / srank series over p
  std::vector<double> nu_grid;   // srank; empty means 0, 0.25, ..., 8
  /// Where generated spectra are cached and CSVs written; empty disables both.
  std::filesystem::path output_dir;
  /// 0: take KRYLOV_THREADS or the hardware concurrency.
  unsigned workers = 0;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Desk-scale defaults for an experiment, or the published scale when
/// full_scale is set (n = 1000 / 8192, 1000 trials).
ExperimentConfig default_config(ExperimentKind kind, bool full_scale);

/// Worker count capped by KRYLOV_THREADS when set.
unsigned resolve_workers(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Exceptions
/// from any task are rethrown on the calling thread (lowest index wins).
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

/// Per-trial stream key tied to (base_seed, ell, trial_id) only.
std::uint64_t trial_seed(std::uint64_t base_seed, int ell, int trial_id);

struct TrialPath {
  std::vector<double> errors;  // relative error at q = 0..q_max
  int first_deflation_depth = -1;
  double wall_time = 0.0;      // seconds
};

/// One deep Krylov build on diag(spectrum), read off at every depth.
/// Throws InvariantViolation if an error leaves [-1e-10, 1 + 1e-10].
TrialPath run_trial(const Spectrum& spectrum, int ell, int q_max, std::uint64_t seed);

/// Loads a cached spectrum from cache_dir if present, else generates (and
/// saves when cache_dir is non-empty).
Spectrum resolve_spectrum(const EnsembleSpec& spec, const std::filesystem::path& cache_dir);

struct TrialRecord {
  int trial_id = 0;
  int ell = 0;
  int q = 0;
  double relative_error = 0.0;
  bool deflated = false;
  double wall_time = 0.0;
};

struct MeanRow {
  int ell = 0;
  int q = 0;
  double mean_error = 0.0;  // arithmetic mean of errors, not of logs
  int trials = 0;
};

struct SamplePathsResult {
  std::vector<TrialRecord> records;  // ordered by (ell, trial_id, q)
  std::vector<MeanRow> means;        // ordered by (ell, q)
};

SamplePathsResult run_sample_paths(const ExperimentConfig& cfg, const Spectrum& spectrum);
SamplePathsResult run_sample_paths(const ExperimentConfig& cfg);

struct BurnInRow {
  std::string series;
  int n = 0;
  double power = 0.0;
  double gamma = 0.0;
  int ell = 0;
  int q = 0;
  double mean_error = 0.0;
  int trials = 0;
};

/// One series per entry of sweep_n (GOE kinds) or sweep_p (power law),
/// each run at every block size in cfg.block_sizes.
std::vector<BurnInRow> run_burn_in(const ExperimentConfig& cfg);

struct BoundCheckRow {
  int ell = 0;
  int q = 0;
  double eps = 0.0;
  int trials = 0;
  double p_hat = 0.0;
  double wilson_half_width = 0.0;
  double prob_bound_gapfree = 1.0;
  double prob_bound_gap = 1.0;
  double prob_bound_best = 1.0;
  double mean_error = 0.0;
  double stderr_mean = 0.0;
  double expect_bound_gapfree = 1.0;
  double expect_bound_gap = 1.0;
  double expect_bound_best = 1.0;
};

std::vector<BoundCheckRow> run_bound_check(const ExperimentConfig& cfg, const Spectrum& spectrum);
std::vector<BoundCheckRow> run_bound_check(const ExperimentConfig& cfg);

struct SrankRow {
  std::string series;
  int n = 0;
  double power = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
  double log_srk = 0.0;
};

/// Throws ConfigError for an identity-multiple spectrum (log 0).
std::vector<SrankRow> run_srank_profile(const ExperimentConfig& cfg);
std::vector<SrankRow> srank_rows(const std::string& series, const EnsembleSpec& spec,
                                 const Spectrum& s, const std::vector<double>& nu_grid);

// CSV output. Header rows are fixed per experiment; floats use 17
// significant digits.
void write_hairlines_csv(std::ostream& out, const SamplePathsResult& r);
void write_means_csv(std::ostream& out, const SamplePathsResult& r);
void write_burn_in_csv(std::ostream& out, const std::vector<BurnInRow>& rows);
void write_bound_check_csv(std::ostream& out, const std::vector<BoundCheckRow>& rows);
void write_srank_csv(std::ostream& out, const std::vector<SrankRow>& rows);

inline constexpr const char* kHairlinesHeader = "ell,trial,q,relative_error,deflated";
inline constexpr const char* kMeansHeader = "ell,q,mean_error,trials";
inline constexpr const char* kBurnInHeader = "series,n,power,gamma,ell,q,mean_error,trials";
inline constexpr const char* kBoundCheckHeader =
    "ell,q,eps,trials,p_hat,wilson_half_width,prob_bound_gapfree,prob_bound_gap,"
    "prob_bound_best,mean_error,stderr,expect_bound_gapfree,expect_bound_gap,"
    "expect_bound_best";
inline constexpr const char* kSrankHeader = "series,n,power,gamma,nu,log_srk";

// Curve statistics used by the experiments and their checks.

/// Half-width of the Wilson score interval for k successes out of n at z.
double wilson_half_width(int successes, int n, double z = 1.0);

/// Least-squares slope of log(values[q]) against q over q in [q_lo, q_hi].
double fit_log_slope(const std::vector<double>& values, int q_lo, int q_hi);

/// First index whose value is <= threshold, or -1.
int depth_to_reach(const std::vector<double>& values, double threshold);

/// Mean-error curve (indexed by q) for one block size.
std::vector<double> mean_curve(const SamplePathsResult& r, int ell);
std::vector<double> mean_curve(const std::vector<BurnInRow>& rows, const std::string& series,
                               int ell);

}  // namespace krylov
