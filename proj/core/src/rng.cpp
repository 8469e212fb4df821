#include "krylov/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace krylov {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_key(std::uint64_t base_seed,
                         std::initializer_list<std::uint64_t> tags) {
  std::uint64_t key = mix64(base_seed + kGolden);
  for (std::uint64_t tag : tags) key = mix64((key ^ mix64(tag + kGolden)) + kGolden);
  return key;
}

CounterRng::CounterRng(std::uint64_t key) noexcept : key_(mix64(key ^ 0x2545F4914F6CDD1DULL)) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return mix64(key_ + (counter + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  // (k + 0.5) / 2^53 keeps the value strictly inside (0, 1).
  const std::uint64_t k = bits(counter) >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t index) const noexcept {
  const std::uint64_t pair = index >> 1;
  const double u1 = uniform(2 * pair);
  const double u2 = uniform(2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
  const CounterRng rng(seed);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, j) = rng.normal(static_cast<std::uint64_t>(j * rows + i));
    }
  }
  return out;
}

Eigen::MatrixXd gaussian_test_matrix(Eigen::Index n, Eigen::Index ell,
                                     std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("test matrix: n must be >= 1");
  if (ell < 1 || ell > n) {
    throw std::invalid_argument("invalid block size: need 1 <= ell <= n");
  }
  return gaussian_matrix(n, ell, seed);
}

}  // namespace krylov
