#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "krylov/matrix_operator.hpp"

namespace krylov {

inline constexpr double kDefaultOrthoTol = 1e-10;

/// Orthonormal basis of K_q(A; B) = span[B, AB, ..., A^q B], built block by
/// block. Block t occupies columns [block_boundaries[t], block_boundaries[t+1]).
struct KrylovBasis {
  Eigen::MatrixXd basis;
  std::vector<Eigen::Index> block_boundaries{0};
  /// Some column was dropped as numerically dependent.
  bool deflated = false;
  /// A whole block vanished, so the basis spans an A-invariant subspace.
  bool invariant = false;
  int depth_built = 0;
  /// Depth of the block where a column was first dropped, -1 if none.
  int first_deflation_depth = -1;

  Eigen::Index columns() const noexcept { return basis.cols(); }
  /// Number of leading columns spanning K_q. Depths beyond depth_built map to
  /// the full basis since the subspace has stopped growing.
  Eigen::Index columns_through_depth(int q) const;
};

/// Block Krylov with full orthogonalization. Each new block A*B_{t-1} is
/// projected against the accumulated basis twice, then orthonormalized
/// column by column. A column whose norm after projection drops below
/// ortho_tol times its norm before projection is discarded. Building stops
/// early once a block is empty.
///
/// Throws std::invalid_argument when q < 0, B has the wrong row count, or B
/// has no numerically independent column.
KrylovBasis build_krylov_basis(const MatrixOperator& a,
                               const Eigen::Ref<const Eigen::MatrixXd>& b, int q,
                               double ortho_tol = kDefaultOrthoTol);

/// H = S^T (A S), symmetrized.
Eigen::MatrixXd rayleigh_compress(const MatrixOperator& a, const KrylovBasis& s);

struct EigEstimate {
  double xi = 0.0;
  Eigen::VectorXd ritz_vector;
  Eigen::Index ell = 0;
  int q = 0;
  std::uint64_t seed = 0;
  bool deflated = false;
};

/// Largest Ritz value over K_q(A; Omega) with Omega ~ N(0,1)^{n x ell}.
EigEstimate estimate_max_eig(const MatrixOperator& a, Eigen::Index ell, int q,
                             std::uint64_t seed);
/// Same, for a caller-supplied test block (seed is reported as 0).
EigEstimate estimate_max_eig(const MatrixOperator& a,
                             const Eigen::Ref<const Eigen::MatrixXd>& b, int q);

/// xi_min(A) = -xi_max(-A); never below lambda_min(A) in exact arithmetic.
EigEstimate estimate_min_eig(const MatrixOperator& a, Eigen::Index ell, int q,
                             std::uint64_t seed);
EigEstimate estimate_min_eig(const MatrixOperator& a,
                             const Eigen::Ref<const Eigen::MatrixXd>& b, int q);

/// Lower estimate of ||C||^2 via the smaller of C C^T and C^T C.
EigEstimate estimate_spectral_norm_sq(const Eigen::MatrixXd& c, Eigen::Index ell,
                                      int q, std::uint64_t seed);

/// Largest Ritz value of every nested subspace K_0 ⊆ ... ⊆ K_{q_max},
/// read off leading blocks of a single compression.
std::vector<double> ritz_values_by_depth(const MatrixOperator& a,
                                         const KrylovBasis& s, int q_max);

/// Largest eigenvalue of a small symmetric matrix (0 for an empty matrix).
double max_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& h);

}  // namespace krylov
