#include "krylov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "krylov/block_krylov.hpp"
#include "krylov/bounds.hpp"
#include "krylov/errors.hpp"
#include "krylov/format.hpp"
#include "krylov/matrix_operator.hpp"
#include "krylov/rng.hpp"

namespace krylov {
namespace {

constexpr double kErrorSlack = 1e-10;

std::string series_label(const ExperimentConfig& cfg, const EnsembleSpec& spec) {
  std::ostringstream s;
  if (spec.kind == EnsembleKind::gapped_power_law && !cfg.sweep_p.empty()) {
    s << "p=" << spec.power;
  } else {
    s << "n=" << spec.n;
  }
  return s.str();
}

// Series of ensembles a sweep experiment iterates over.
std::vector<EnsembleSpec> series_specs(const ExperimentConfig& cfg) {
  std::vector<EnsembleSpec> out;
  if (cfg.ensemble.kind == EnsembleKind::gapped_power_law && !cfg.sweep_p.empty()) {
    for (double p : cfg.sweep_p) {
      EnsembleSpec s = cfg.ensemble;
      s.power = p;
      out.push_back(s);
    }
  } else if (!cfg.sweep_n.empty()) {
    for (int n : cfg.sweep_n) {
      EnsembleSpec s = cfg.ensemble;
      s.n = n;
      out.push_back(s);
    }
  } else {
    out.push_back(cfg.ensemble);
  }
  return out;
}

// Runs every trial for one block size; result index == trial id.
std::vector<TrialPath> run_trials(const ExperimentConfig& cfg, const Spectrum& spectrum,
                                  int ell, int q_max) {
  std::vector<TrialPath> paths(static_cast<std::size_t>(cfg.trials));
  parallel_for(paths.size(), resolve_workers(cfg.workers), [&](std::size_t t) {
    paths[t] = run_trial(spectrum, ell, q_max,
                         trial_seed(cfg.base_seed, ell, static_cast<int>(t)));
  });
  return paths;
}

std::vector<double> mean_over_trials(const std::vector<TrialPath>& paths, int q_max) {
  std::vector<double> mean(static_cast<std::size_t>(q_max) + 1, 0.0);
  for (const auto& path : paths) {
    for (int q = 0; q <= q_max; ++q) mean[static_cast<std::size_t>(q)] += path.errors[static_cast<std::size_t>(q)];
  }
  for (double& m : mean) m /= static_cast<double>(paths.size());
  return mean;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& raw) {
  std::string name = raw;
  std::replace(name.begin(), name.end(), '_', '-');
  if (name == "sample-paths") return ExperimentKind::sample_paths;
  if (name == "burn-in") return ExperimentKind::burn_in;
  if (name == "srank" || name == "srank-profile") return ExperimentKind::srank_profile;
  if (name == "bound-check") return ExperimentKind::bound_check;
  throw ConfigError("unknown experiment '" + raw + "'");
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sample_paths: return "sample-paths";
    case ExperimentKind::burn_in: return "burn-in";
    case ExperimentKind::srank_profile: return "srank";
    case ExperimentKind::bound_check: return "bound-check";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  try {
    for (const auto& spec : series_specs(*this)) spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (q_max < 0) throw ConfigError("q_max must be >= 0");
  const bool uses_blocks = experiment != ExperimentKind::srank_profile;
  if (uses_blocks && block_sizes.empty()) throw ConfigError("block size list is empty");
  for (const auto& spec : series_specs(*this)) {
    for (int ell : block_sizes) {
      if (uses_blocks && (ell < 1 || ell > spec.n)) {
        throw ConfigError("block size " + std::to_string(ell) + " outside [1, n]");
      }
    }
  }
  if (experiment == ExperimentKind::bound_check) {
    if (eps_grid.empty()) throw ConfigError("bound-check needs a nonempty eps grid");
    for (double e : eps_grid) {
      if (!(e > 0.0 && e <= 1.0)) throw ConfigError("eps values must lie in (0, 1]");
    }
    for (int q : q_grid) {
      if (q < 0) throw ConfigError("depth grid values must be >= 0");
    }
  }
  for (double nu : nu_grid) {
    if (!(nu >= 0.0)) throw ConfigError("nu grid values must be >= 0");
  }
}

ExperimentConfig default_config(ExperimentKind kind, bool full_scale) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.ensemble.kind = EnsembleKind::gapped_goe;
  cfg.ensemble.gamma = 0.1;
  cfg.ensemble.n = full_scale ? 1000 : 400;
  cfg.trials = full_scale ? 1000 : 200;
  switch (kind) {
    case ExperimentKind::sample_paths:
      cfg.block_sizes = {1, 2, 3, 4};
      cfg.q_max = full_scale ? 30 : 25;
      break;
    case ExperimentKind::burn_in:
      cfg.block_sizes = {2};
      cfg.q_max = full_scale ? 60 : 40;
      cfg.sweep_n = full_scale ? std::vector<int>{256, 512, 1024, 2048, 4096, 8192}
                                : std::vector<int>{128, 256, 512, 1024};
      cfg.sweep_p = {1, 2, 4};
      break;
    case ExperimentKind::srank_profile:
      cfg.sweep_n = full_scale ? std::vector<int>{256, 512, 1024, 2048, 4096, 8192}
                                : std::vector<int>{256, 512, 1024, 2048};
      cfg.sweep_p = {1, 2, 4, 8};
      break;
    case ExperimentKind::bound_check:
      cfg.ensemble.kind = EnsembleKind::gapped_power_law;
      cfg.ensemble.n = 256;
      cfg.ensemble.power = 1.0;
      cfg.block_sizes = {1, 2, 4};
      cfg.q_grid = {2, 5, 10, 20};
      cfg.q_max = 20;
      cfg.eps_grid = {0.5, 0.1, 0.01};
      cfg.trials = 1000;
      break;
  }
  return cfg;
}

unsigned resolve_workers(unsigned requested) {
  unsigned workers = requested;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KRYLOV_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
  }
  return std::max(1u, workers);
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t trial_seed(std::uint64_t base_seed, int ell, int trial_id) {
  return derive_key(base_seed, {static_cast<std::uint64_t>(ell),
                                static_cast<std::uint64_t>(trial_id)});
}

TrialPath run_trial(const Spectrum& spectrum, int ell, int q_max, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const MatrixOperator a = MatrixOperator::diagonal(spectrum);
  const Eigen::MatrixXd omega = gaussian_test_matrix(a.dim(), ell, seed);
  const KrylovBasis basis = build_krylov_basis(a, omega, q_max);
  const std::vector<double> ritz = ritz_values_by_depth(a, basis, q_max);

  TrialPath path;
  path.first_deflation_depth = basis.first_deflation_depth;
  path.errors.reserve(ritz.size());
  for (std::size_t q = 0; q < ritz.size(); ++q) {
    const double err = relative_error(spectrum, ritz[q]);
    if (!(err >= -kErrorSlack && err <= 1.0 + kErrorSlack)) {
      throw InvariantViolation("relative error " + format_double(err) +
                               " outside [0, 1] at ell=" + std::to_string(ell) +
                               " q=" + std::to_string(q));
    }
    path.errors.push_back(err);
  }
  path.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return path;
}

Spectrum resolve_spectrum(const EnsembleSpec& spec, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return generate_spectrum(spec);
  const auto file = cache_dir / "spectra" / spectrum_file_name(spec);
  if (std::filesystem::exists(file)) return load_spectrum(file);
  Spectrum s = generate_spectrum(spec);
  save_spectrum(file, s);
  return s;
}

SamplePathsResult run_sample_paths(const ExperimentConfig& cfg, const Spectrum& spectrum) {
  cfg.validate();
  SamplePathsResult result;
  for (int ell : cfg.block_sizes) {
    const auto paths = run_trials(cfg, spectrum, ell, cfg.q_max);
    for (std::size_t t = 0; t < paths.size(); ++t) {
      const auto& path = paths[t];
      for (int q = 0; q <= cfg.q_max; ++q) {
        result.records.push_back(
            {static_cast<int>(t), ell, q, path.errors[static_cast<std::size_t>(q)],
             path.first_deflation_depth >= 0 && path.first_deflation_depth <= q,
             path.wall_time});
      }
    }
    const auto mean = mean_over_trials(paths, cfg.q_max);
    for (int q = 0; q <= cfg.q_max; ++q) {
      result.means.push_back({ell, q, mean[static_cast<std::size_t>(q)], cfg.trials});
    }
  }
  return result;
}

SamplePathsResult run_sample_paths(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_sample_paths(cfg, resolve_spectrum(cfg.ensemble, cfg.output_dir));
}

std::vector<BurnInRow> run_burn_in(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<BurnInRow> rows;
  for (const auto& spec : series_specs(cfg)) {
    const Spectrum spectrum = resolve_spectrum(spec, cfg.output_dir);
    const std::string label = series_label(cfg, spec);
    for (int ell : cfg.block_sizes) {
      const auto mean = mean_over_trials(run_trials(cfg, spectrum, ell, cfg.q_max), cfg.q_max);
      for (int q = 0; q <= cfg.q_max; ++q) {
        rows.push_back({label, spec.n,
                        spec.kind == EnsembleKind::gapped_power_law ? spec.power : 0.0,
                        spec.gamma, ell, q, mean[static_cast<std::size_t>(q)], cfg.trials});
      }
    }
  }
  return rows;
}

std::vector<BoundCheckRow> run_bound_check(const ExperimentConfig& cfg, const Spectrum& spectrum) {
  cfg.validate();
  std::vector<int> depths = cfg.q_grid;
  if (depths.empty()) {
    for (int q = 0; q <= cfg.q_max; ++q) depths.push_back(q);
  }
  const int deepest = *std::max_element(depths.begin(), depths.end());
  const SrkProfile srk = SrkProfile::from_spectrum(spectrum);
  const double gamma = spectral_gap(spectrum);

  std::vector<BoundCheckRow> rows;
  for (int ell : cfg.block_sizes) {
    const auto paths = run_trials(cfg, spectrum, ell, deepest);
    for (int q : depths) {
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& path : paths) {
        const double e = path.errors[static_cast<std::size_t>(q)];
        sum += e;
        sum_sq += e * e;
      }
      const double n = static_cast<double>(paths.size());
      const double mean = sum / n;
      const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
      for (double eps : cfg.eps_grid) {
        int hits = 0;
        for (const auto& path : paths) {
          if (path.errors[static_cast<std::size_t>(q)] >= eps) ++hits;
        }
        const BoundReport report = best_bound(srk, gamma, ell, q, eps);
        BoundCheckRow row;
        row.ell = ell;
        row.q = q;
        row.eps = eps;
        row.trials = cfg.trials;
        row.p_hat = hits / n;
        row.wilson_half_width = wilson_half_width(hits, cfg.trials);
        row.prob_bound_gapfree = report.best_prob_gapfree.value;
        row.prob_bound_gap = report.best_prob_gap.value;
        row.prob_bound_best = report.best_probability;
        row.mean_error = mean;
        row.stderr_mean = std::sqrt(var / n);
        row.expect_bound_gapfree = report.best_expect_gapfree.value;
        row.expect_bound_gap = report.best_expect_gap.value;
        row.expect_bound_best = report.best_expectation;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<BoundCheckRow> run_bound_check(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_bound_check(cfg, resolve_spectrum(cfg.ensemble, cfg.output_dir));
}

std::vector<SrankRow> srank_rows(const std::string& series, const EnsembleSpec& spec,
                                 const Spectrum& s, const std::vector<double>& nu_grid) {
  if (s.is_identity_multiple()) {
    throw ConfigError("stable rank of an identity multiple is 0; log srk is undefined");
  }
  std::vector<double> grid = nu_grid;
  if (grid.empty()) {
    for (int k = 0; k <= 32; ++k) grid.push_back(0.25 * k);
  }
  std::vector<SrankRow> rows;
  for (double nu : grid) {
    rows.push_back({series, spec.n,
                    spec.kind == EnsembleKind::gapped_power_law ? spec.power : 0.0,
                    spec.gamma, nu, std::log(stable_rank(s, nu))});
  }
  return rows;
}

std::vector<SrankRow> run_srank_profile(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SrankRow> rows;
  for (const auto& spec : series_specs(cfg)) {
    const Spectrum s = resolve_spectrum(spec, cfg.output_dir);
    auto part = srank_rows(series_label(cfg, spec), spec, s, cfg.nu_grid);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

void write_hairlines_csv(std::ostream& out, const SamplePathsResult& r) {
  out << kHairlinesHeader << '\n';
  for (const auto& rec : r.records) {
    out << rec.ell << ',' << rec.trial_id << ',' << rec.q << ','
        << format_double(rec.relative_error) << ',' << (rec.deflated ? 1 : 0) << '\n';
  }
}

void write_means_csv(std::ostream& out, const SamplePathsResult& r) {
  out << kMeansHeader << '\n';
  for (const auto& m : r.means) {
    out << m.ell << ',' << m.q << ',' << format_double(m.mean_error) << ',' << m.trials << '\n';
  }
}

void write_burn_in_csv(std::ostream& out, const std::vector<BurnInRow>& rows) {
  out << kBurnInHeader << '\n';
  for (const auto& r : rows) {
    out << r.series << ',' << r.n << ',' << format_double(r.power) << ','
        << format_double(r.gamma) << ',' << r.ell << ',' << r.q << ','
        << format_double(r.mean_error) << ',' << r.trials << '\n';
  }
}

void write_bound_check_csv(std::ostream& out, const std::vector<BoundCheckRow>& rows) {
  out << kBoundCheckHeader << '\n';
  for (const auto& r : rows) {
    out << r.ell << ',' << r.q << ',' << format_double(r.eps) << ',' << r.trials << ','
        << format_double(r.p_hat) << ',' << format_double(r.wilson_half_width) << ','
        << format_double(r.prob_bound_gapfree) << ',' << format_double(r.prob_bound_gap) << ','
        << format_double(r.prob_bound_best) << ',' << format_double(r.mean_error) << ','
        << format_double(r.stderr_mean) << ',' << format_double(r.expect_bound_gapfree) << ','
        << format_double(r.expect_bound_gap) << ',' << format_double(r.expect_bound_best)
        << '\n';
  }
}

void write_srank_csv(std::ostream& out, const std::vector<SrankRow>& rows) {
  out << kSrankHeader << '\n';
  for (const auto& r : rows) {
    out << r.series << ',' << r.n << ',' << format_double(r.power) << ','
        << format_double(r.gamma) << ',' << format_double(r.nu) << ','
        << format_double(r.log_srk) << '\n';
  }
}

double wilson_half_width(int successes, int n, double z) {
  if (n < 1) throw std::invalid_argument("Wilson interval needs n >= 1");
  const double nn = n;
  const double p = successes / nn;
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

double fit_log_slope(const std::vector<double>& values, int q_lo, int q_hi) {
  if (q_lo < 0 || q_hi >= static_cast<int>(values.size()) || q_hi - q_lo < 1) {
    throw std::invalid_argument("fit window must hold at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = q_hi - q_lo + 1;
  for (int q = q_lo; q <= q_hi; ++q) {
    const double y = std::log(values[static_cast<std::size_t>(q)]);
    sx += q;
    sy += y;
    sxx += static_cast<double>(q) * q;
    sxy += q * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

int depth_to_reach(const std::vector<double>& values, double threshold) {
  for (std::size_t q = 0; q < values.size(); ++q) {
    if (values[q] <= threshold) return static_cast<int>(q);
  }
  return -1;
}

std::vector<double> mean_curve(const SamplePathsResult& r, int ell) {
  std::vector<double> out;
  for (const auto& m : r.means) {
    if (m.ell == ell) out.push_back(m.mean_error);
  }
  return out;
}

std::vector<double> mean_curve(const std::vector<BurnInRow>& rows, const std::string& series,
                               int ell) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.series == series && r.ell == ell) out.push_back(r.mean_error);
  }
  return out;
}

}  // namespace krylov
