#include <benchmark/benchmark.h>

#include "krylov/block_krylov.hpp"
#include "krylov/bounds.hpp"
#include "krylov/generators.hpp"
#include "krylov/matrix_operator.hpp"
#include "krylov/rng.hpp"

using namespace krylov;

namespace {

void BM_BuildBasis(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto ell = state.range(1);
  const auto op = MatrixOperator::diagonal(gapped_goe_spectrum(n, 0.1, 0));
  const Eigen::MatrixXd omega = gaussian_test_matrix(n, ell, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_krylov_basis(op, omega, 25));
}
BENCHMARK(BM_BuildBasis)->Args({400, 1})->Args({400, 4})->Args({2048, 2});

void BM_EstimateMaxEigDense(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd g = gaussian_matrix(n, n, 2);
  const auto op = MatrixOperator::dense(0.5 * (g + g.transpose()));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_max_eig(op, 2, 20, 3));
}
BENCHMARK(BM_EstimateMaxEigDense)->Arg(200)->Arg(800);

void BM_BestBound(benchmark::State& state) {
  const Spectrum s = gapped_power_law_spectrum(static_cast<int>(state.range(0)), 1.0, 0.1);
  const SrkProfile srk = SrkProfile::from_spectrum(s);
  const double gamma = spectral_gap(s);
  for (auto _ : state) benchmark::DoNotOptimize(best_bound(srk, gamma, 2, 30, 0.01));
}
BENCHMARK(BM_BestBound)->Arg(256)->Arg(8192);

}  // namespace

BENCHMARK_MAIN();
