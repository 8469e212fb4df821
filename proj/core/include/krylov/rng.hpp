#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Core>

namespace krylov {

/// Derives an independent stream key from a base seed and a list of tags
/// (e.g. block size and trial id). Chained SplitMix64 finalizers, so keys
/// for distinct tag tuples are unrelated.
std::uint64_t derive_key(std::uint64_t base_seed,
                         std::initializer_list<std::uint64_t> tags);

/// Counter-based generator: draw i of stream `key` is a pure function of
/// (key, i). Standard normals come from Box-Muller on pairs of 53-bit
/// uniforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  /// Standard normal; counters 2k and 2k+1 share one Box-Muller pair.
  double normal(std::uint64_t index) const noexcept;

 private:
  std::uint64_t key_;
};

/// n x ell block of i.i.d. N(0,1) entries. Entry (i, j) depends only on
/// (seed, j * n + i). Throws std::invalid_argument unless 1 <= ell <= n.
Eigen::MatrixXd gaussian_test_matrix(Eigen::Index n, Eigen::Index ell,
                                     std::uint64_t seed);

/// Rectangular rows x cols standard normal draw (no block-size check).
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed);

}  // namespace krylov
