#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krylov/block_krylov.hpp"
#include "krylov/bounds.hpp"
#include "krylov/errors.hpp"
#include "krylov/format.hpp"
#include "krylov/generators.hpp"
#include "krylov/harness.hpp"
#include "krylov/matrix_market.hpp"
#include "krylov/matrix_operator.hpp"
#include "krylov/spectrum.hpp"

namespace fs = std::filesystem;
using namespace krylov;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;
constexpr double kErrorSlack = 1e-10;

// Flags shared by every subcommand that needs a spectrum. Unset optionals
// leave the subcommand's defaults in place.
struct EnsembleFlags {
  std::optional<std::string> ensemble;
  std::optional<int> n;
  std::optional<double> gamma;
  std::optional<double> power;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app) {
    app.add_option("--ensemble", ensemble,
                   "goe, gapped-goe, power-law, laplacian, inverse-laplacian");
    app.add_option("--n", n, "dimension");
    app.add_option("--gamma", gamma, "spectral gap for the gapped ensembles");
    app.add_option("--power", power, "power-law order p");
    app.add_option("--seed", seed, "random seed");
  }

  EnsembleSpec spec(EnsembleSpec base = {}) const {
    if (ensemble) base.kind = parse_ensemble_kind(*ensemble);
    if (n) base.n = *n;
    if (gamma) base.gamma = *gamma;
    if (power) base.power = *power;
    if (seed) base.seed = *seed;
    validate(base);
    return base;
  }

  static void validate(const EnsembleSpec& s) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

void print_kv(const std::string& key, double value) {
  std::cout << key << '=' << format_double(value) << '\n';
}

Spectrum spectrum_from(const EnsembleFlags& flags, const std::optional<std::string>& file) {
  if (file) return load_spectrum(*file);
  return generate_spectrum(flags.spec());
}

// Config files hold bare `key = value` lines; they bind to the options of
// the subcommand selected on the command line.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App& root) : root_(root) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    std::vector<std::string> path;
    for (const CLI::App* app = &root_; !app->get_subcommands().empty();) {
      app = app->get_subcommands().front();
      path.push_back(app->get_name());
    }
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = path;
    }
    return items;
  }

 private:
  const CLI::App& root_;
};

// estimate -------------------------------------------------------------------

struct EstimateArgs {
  EnsembleFlags ensemble;
  std::optional<std::string> matrix;
  std::optional<std::string> spectrum;
  Eigen::Index ell = 1;
  int q = 10;
  bool min = false;
  bool norm = false;
};

int run_estimate(const EstimateArgs& args) {
  const std::uint64_t seed = args.ensemble.seed.value_or(0);
  std::optional<Spectrum> reference;
  if (args.spectrum) reference = load_spectrum(*args.spectrum);

  EigEstimate est;
  if (args.norm) {
    if (!args.matrix) throw ConfigError("--norm needs --matrix");
    const auto c = load_matrix_market(*args.matrix).values;
    est = estimate_spectral_norm_sq(c, args.ell, args.q, seed);
  } else {
    std::optional<MatrixOperator> op;
    if (args.matrix) {
      const auto m = load_matrix_market(*args.matrix).values;
      if (m.rows() != m.cols()) throw ConfigError("matrix must be square (use --norm for C)");
      op = MatrixOperator::dense(m);
    } else {
      const Spectrum s = generate_spectrum(args.ensemble.spec());
      if (!reference) reference = s;
      op = MatrixOperator::diagonal(s);
    }
    est = args.min ? estimate_min_eig(*op, args.ell, args.q, seed)
                   : estimate_max_eig(*op, args.ell, args.q, seed);
  }

  print_kv("xi", est.xi);
  std::cout << "ell=" << est.ell << "\nq=" << est.q << "\nseed=" << est.seed
            << "\ndeflated=" << (est.deflated ? 1 : 0) << '\n';
  if (reference) {
    const double err = args.min ? (est.xi - reference->min()) / reference->range()
                                : relative_error(*reference, est.xi);
    print_kv("relative_error", err);
    if (!(err >= -kErrorSlack && err <= 1.0 + kErrorSlack)) {
      throw InvariantViolation("relative error " + format_double(err) +
                               " against the reference spectrum is outside [0, 1]");
    }
  }
  return 0;
}

// bounds ---------------------------------------------------------------------

struct BoundsArgs {
  EnsembleFlags ensemble;
  std::optional<std::string> spectrum;
  int ell = 1;
  int q = 10;
  double eps = 0.1;
  std::optional<std::string> out;
};

int run_bounds(const BoundsArgs& args) {
  if (!(args.eps >= 0.0 && args.eps <= 1.0)) throw ConfigError("--eps must lie in [0, 1]");
  if (args.ell < 1) throw ConfigError("--ell must be >= 1");
  if (args.q < 0) throw ConfigError("--q must be >= 0");
  const Spectrum s = spectrum_from(args.ensemble, args.spectrum);
  const double gamma = spectral_gap(s);
  const BoundReport r = best_bound(SrkProfile::from_spectrum(s), gamma, args.ell, args.q, args.eps);

  std::cout << "ell=" << r.ell << "\nq=" << r.q << '\n';
  print_kv("eps", r.eps);
  print_kv("gamma", r.gamma);
  print_kv("best_probability", r.best_probability);
  print_kv("best_expectation", r.best_expectation);
  const auto best = [](const char* name, const BestValue& v) {
    std::cout << name << '=' << format_double(v.value) << " q1=" << v.q1 << '\n';
  };
  best("prob_gapfree", r.best_prob_gapfree);
  best("prob_gap", r.best_prob_gap);
  best("expect_gapfree", r.best_expect_gapfree);
  best("expect_gap", r.best_expect_gap);

  if (args.out) {
    std::ofstream csv(*args.out);
    if (!csv) throw ConfigError("cannot write " + *args.out);
    csv << "q1,q2,srk_q1,prob_gapfree,expect_gapfree,prob_gap,expect_gap,gap_factor\n";
    for (const auto& p : r.partitions) {
      csv << p.q1 << ',' << p.q2 << ',' << format_double(p.srk_q1) << ','
          << format_double(p.prob_gapfree) << ',' << format_double(p.expect_gapfree) << ','
          << format_double(p.prob_gap) << ',' << format_double(p.expect_gap) << ','
          << format_double(p.gap_factor) << '\n';
    }
  }
  return 0;
}

// generate -------------------------------------------------------------------

struct GenerateArgs {
  EnsembleFlags ensemble;
  std::string out = ".";
};

int run_generate(const GenerateArgs& args) {
  const EnsembleSpec spec = args.ensemble.spec();
  fs::create_directories(args.out);
  const fs::path file = fs::path(args.out) / spectrum_file_name(spec);
  save_spectrum(file, generate_spectrum(spec));
  std::cout << file.string() << '\n';
  return 0;
}

// experiment -----------------------------------------------------------------

struct ExperimentArgs {
  ExperimentKind kind = ExperimentKind::sample_paths;
  EnsembleFlags ensemble;
  std::optional<std::vector<int>> n_list;
  std::optional<std::vector<double>> power_list;
  std::optional<std::vector<int>> ell;
  std::optional<int> q;
  std::optional<std::vector<int>> depths;
  std::optional<int> trials;
  std::optional<std::vector<double>> eps;
  std::optional<std::vector<double>> nu;
  std::string out = "results";
  bool full_scale = false;
};

int only_value(const std::vector<int>& v, const char* flag) {
  if (v.size() != 1) throw ConfigError(std::string(flag) + " takes a single value here");
  return v.front();
}

ExperimentConfig resolve_config(const ExperimentArgs& a) {
  ExperimentConfig cfg = default_config(a.kind, a.full_scale);
  if (a.ensemble.ensemble) cfg.ensemble.kind = parse_ensemble_kind(*a.ensemble.ensemble);
  const bool series = a.kind == ExperimentKind::burn_in || a.kind == ExperimentKind::srank_profile;
  const bool power_law = cfg.ensemble.kind == EnsembleKind::gapped_power_law;
  if (series && power_law) {
    cfg.ensemble.n = a.full_scale ? 8192 : 2048;
    cfg.sweep_n.clear();
  }
  if (a.n_list) {
    if (series && !power_law) {
      cfg.sweep_n = *a.n_list;
    } else {
      cfg.ensemble.n = only_value(*a.n_list, "--n");
    }
  }
  if (a.power_list) {
    if (series && power_law) {
      cfg.sweep_p = *a.power_list;
    } else if (a.power_list->size() == 1) {
      cfg.ensemble.power = a.power_list->front();
    } else {
      throw ConfigError("--power takes a single value here");
    }
  }
  if (series && !power_law) cfg.sweep_p.clear();
  if (a.ensemble.gamma) cfg.ensemble.gamma = *a.ensemble.gamma;
  if (a.ensemble.seed) {
    cfg.base_seed = *a.ensemble.seed;
    cfg.ensemble.seed = *a.ensemble.seed;
  }
  if (a.ell) cfg.block_sizes = *a.ell;
  if (a.q) cfg.q_max = *a.q;
  if (a.depths) cfg.q_grid = *a.depths;
  if (a.q && !a.depths && a.kind == ExperimentKind::bound_check) {
    std::vector<int> kept;
    for (int d : cfg.q_grid) {
      if (d <= cfg.q_max) kept.push_back(d);
    }
    cfg.q_grid = kept.empty() ? std::vector<int>{cfg.q_max} : kept;
  }
  if (a.trials) cfg.trials = *a.trials;
  if (a.eps) cfg.eps_grid = *a.eps;
  if (a.nu) cfg.nu_grid = *a.nu;
  cfg.output_dir = a.out;
  cfg.validate();
  return cfg;
}

std::string list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

void describe(const ExperimentConfig& cfg) {
  std::cout << "experiment=" << experiment_kind_name(cfg.experiment)
            << " ensemble=" << ensemble_kind_name(cfg.ensemble.kind);
  if (cfg.experiment == ExperimentKind::burn_in || cfg.experiment == ExperimentKind::srank_profile) {
    if (cfg.ensemble.kind == EnsembleKind::gapped_power_law) {
      std::cout << " n=" << cfg.ensemble.n << " p=[" << list(cfg.sweep_p) << "]";
    } else {
      std::cout << " n=[" << list(cfg.sweep_n) << "]";
    }
  } else {
    std::cout << " n=" << cfg.ensemble.n;
  }
  std::cout << " gamma=" << cfg.ensemble.gamma;
  if (cfg.experiment != ExperimentKind::srank_profile) {
    std::cout << " ell=[" << list(cfg.block_sizes) << "] q_max=" << cfg.q_max
              << " trials=" << cfg.trials << " seed=" << cfg.base_seed;
  }
  std::cout << '\n';
}

template <class Write>
void write_csv(const fs::path& path, Write&& write) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write(out);
  std::cout << "wrote " << path.string() << '\n';
}

int run_experiment(const ExperimentArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  describe(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir;
  switch (cfg.experiment) {
    case ExperimentKind::sample_paths: {
      const auto r = run_sample_paths(cfg);
      write_csv(dir / "hairlines.csv", [&](std::ostream& o) { write_hairlines_csv(o, r); });
      write_csv(dir / "means.csv", [&](std::ostream& o) { write_means_csv(o, r); });
      break;
    }
    case ExperimentKind::burn_in: {
      const auto rows = run_burn_in(cfg);
      write_csv(dir / "burn_in.csv", [&](std::ostream& o) { write_burn_in_csv(o, rows); });
      break;
    }
    case ExperimentKind::bound_check: {
      const auto rows = run_bound_check(cfg);
      write_csv(dir / "bound_check.csv", [&](std::ostream& o) { write_bound_check_csv(o, rows); });
      break;
    }
    case ExperimentKind::srank_profile: {
      const auto rows = run_srank_profile(cfg);
      write_csv(dir / "srank.csv", [&](std::ostream& o) { write_srank_csv(o, rows); });
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized block Krylov estimates of extreme eigenvalues, their error bounds, "
               "and the experiments that check them."};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<SubcommandConfig>(app));
  app.set_config("--config", "", "TOML key = value file for the chosen subcommand; flags win");
  // Inherited by subcommands: --config may follow them.
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  int status = 0;

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate lambda_max (or lambda_min, ||C||^2)");
  estimate->add_option("--matrix", est.matrix, "Matrix Market file (symmetric, or C with --norm)");
  estimate->add_option("--spectrum", est.spectrum, "reference spectrum for the error check");
  estimate->add_option("--ell", est.ell, "block size")->capture_default_str();
  estimate->add_option("--q", est.q, "Krylov depth")->capture_default_str();
  estimate->add_flag("--min", est.min, "estimate lambda_min");
  estimate->add_flag("--norm", est.norm, "estimate ||C||^2 of a rectangular --matrix");
  est.ensemble.add_to(*estimate);
  estimate->callback([&] { status = run_estimate(est); });

  BoundsArgs bnd;
  auto* bounds = app.add_subcommand("bounds", "best error bounds over all depth partitions");
  bounds->add_option("--spectrum", bnd.spectrum, "spectrum file (else generate an ensemble)");
  bounds->add_option("--ell", bnd.ell, "block size")->capture_default_str();
  bounds->add_option("--q", bnd.q, "Krylov depth")->capture_default_str();
  bounds->add_option("--eps", bnd.eps, "error level")->capture_default_str();
  bounds->add_option("--out", bnd.out, "write the per-partition table as CSV");
  bnd.ensemble.add_to(*bounds);
  bounds->callback([&] { status = run_bounds(bnd); });

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write an ensemble spectrum file");
  generate->add_option("--out", gen.out, "output directory")->capture_default_str();
  gen.ensemble.add_to(*generate);
  generate->callback([&] { status = run_generate(gen); });

  auto* experiment = app.add_subcommand("experiment", "run an experiment and write CSVs");
  experiment->require_subcommand(1);
  std::vector<ExperimentArgs> exp_args(4);
  const std::vector<std::pair<ExperimentKind, const char*>> kinds{
      {ExperimentKind::sample_paths, "per-trial error paths and their mean"},
      {ExperimentKind::burn_in, "mean error against depth across n or p"},
      {ExperimentKind::bound_check, "empirical error rates against the bounds"},
      {ExperimentKind::srank_profile, "log stable rank profiles"},
  };
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    ExperimentArgs& a = exp_args[i];
    a.kind = kinds[i].first;
    auto* sub = experiment->add_subcommand(experiment_kind_name(a.kind), kinds[i].second);
    sub->add_option("--ensemble", a.ensemble.ensemble,
                    "goe, gapped-goe, power-law, laplacian, inverse-laplacian");
    sub->add_option("--n", a.n_list, "dimension (a list sweeps n for burn-in and srank)");
    sub->add_option("--power", a.power_list, "power-law order (a list sweeps p)");
    sub->add_option("--gamma", a.ensemble.gamma, "spectral gap");
    sub->add_option("--seed", a.ensemble.seed, "base seed");
    sub->add_option("--out", a.out, "output directory")->capture_default_str();
    sub->add_flag("--paper-scale", a.full_scale, "published sizes and trial counts");
    if (a.kind != ExperimentKind::srank_profile) {
      sub->add_option("--ell", a.ell, "block sizes");
      sub->add_option("--q", a.q, "maximum depth");
      sub->add_option("--trials", a.trials, "trials per block size");
    }
    if (a.kind == ExperimentKind::bound_check) {
      sub->add_option("--eps", a.eps, "error levels");
      sub->add_option("--depths", a.depths, "depths to check");
    }
    if (a.kind == ExperimentKind::srank_profile) sub->add_option("--nu", a.nu, "nu grid");
    sub->callback([&status, &a] { status = run_experiment(a); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}
