#include "krylov/block_krylov.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "krylov/rng.hpp"

namespace krylov {
namespace {

// Appends the columns of `block` that survive the deflation test to
// basis.leftCols(count). `pre_norms` are the column norms before any
// projection against the existing basis. Returns the number added.
Eigen::Index orthonormalize_into(Eigen::MatrixXd& basis, Eigen::Index count,
                                 Eigen::MatrixXd block,
                                 const Eigen::VectorXd& pre_norms,
                                 double ortho_tol) {
  const Eigen::Index first = count;
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    if (count == basis.cols()) break;
    if (!(pre_norms(j) > 0.0)) continue;
    Eigen::VectorXd v = block.col(j);
    // CGS2 against the columns already accepted from this block.
    for (int pass = 0; pass < 2 && count > first; ++pass) {
      const auto fresh = basis.middleCols(first, count - first);
      v.noalias() -= fresh * (fresh.transpose() * v);
    }
    const double norm = v.norm();
    if (norm <= ortho_tol * pre_norms(j)) continue;
    basis.col(count++) = v / norm;
  }
  return count - first;
}

}  // namespace

Eigen::Index KrylovBasis::columns_through_depth(int q) const {
  if (q < 0) throw std::invalid_argument("depth must be >= 0");
  if (q > depth_built && !invariant) {
    throw std::invalid_argument("basis was not built to the requested depth");
  }
  const int t = std::min(q, depth_built);
  return block_boundaries[static_cast<std::size_t>(t) + 1];
}

KrylovBasis build_krylov_basis(const MatrixOperator& a,
                               const Eigen::Ref<const Eigen::MatrixXd>& b, int q,
                               double ortho_tol) {
  if (q < 0) throw std::invalid_argument("depth q must be >= 0");
  const Eigen::Index n = a.dim();
  if (b.rows() != n || b.cols() < 1) {
    throw std::invalid_argument("test block must be n x ell with ell >= 1");
  }
  const Eigen::Index ell = b.cols();
  const Eigen::Index capacity = std::min<Eigen::Index>(n, (q + 1) * ell);

  Eigen::MatrixXd storage(n, capacity);
  KrylovBasis out;
  Eigen::Index count = orthonormalize_into(storage, 0, b, b.colwise().norm().transpose(),
                                           ortho_tol);
  if (count == 0) throw std::invalid_argument("test block is numerically zero");
  if (count < ell) {
    out.deflated = true;
    out.first_deflation_depth = 0;
  }
  out.block_boundaries.push_back(count);

  for (int t = 1; t <= q; ++t) {
    const Eigen::Index lo = out.block_boundaries[static_cast<std::size_t>(t) - 1];
    const Eigen::Index hi = out.block_boundaries[static_cast<std::size_t>(t)];
    Eigen::MatrixXd next = a.apply(storage.middleCols(lo, hi - lo));
    const Eigen::VectorXd pre_norms = next.colwise().norm().transpose();
    const auto span = storage.leftCols(count);
    // Two full projections: a single classical Gram-Schmidt sweep loses
    // orthogonality once the new block is nearly inside the span.
    next.noalias() -= span * (span.transpose() * next);
    next.noalias() -= span * (span.transpose() * next);

    const Eigen::Index added =
        orthonormalize_into(storage, count, std::move(next), pre_norms, ortho_tol);
    if (added < hi - lo && !out.deflated) {
      out.deflated = true;
      out.first_deflation_depth = t;
    }
    if (added == 0) {
      out.invariant = true;
      break;
    }
    count += added;
    out.block_boundaries.push_back(count);
    out.depth_built = t;
  }
  out.basis = storage.leftCols(count);
  return out;
}

Eigen::MatrixXd rayleigh_compress(const MatrixOperator& a, const KrylovBasis& s) {
  const Eigen::MatrixXd as = a.apply(s.basis);
  Eigen::MatrixXd h = s.basis.transpose() * as;
  return 0.5 * (h + h.transpose());
}

double max_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& h) {
  if (h.rows() == 0) return 0.0;
  if (h.rows() == 1) return h(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues()(h.rows() - 1);
}

EigEstimate estimate_max_eig(const MatrixOperator& a,
                             const Eigen::Ref<const Eigen::MatrixXd>& b, int q) {
  const KrylovBasis s = build_krylov_basis(a, b, q);
  const Eigen::MatrixXd h = rayleigh_compress(a, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  const Eigen::Index top = h.rows() - 1;
  EigEstimate est;
  est.xi = solver.eigenvalues()(top);
  est.ritz_vector = s.basis * solver.eigenvectors().col(top);
  est.ritz_vector.normalize();
  est.ell = b.cols();
  est.q = q;
  est.deflated = s.deflated;
  return est;
}

EigEstimate estimate_max_eig(const MatrixOperator& a, Eigen::Index ell, int q,
                             std::uint64_t seed) {
  if (q < 0) throw std::invalid_argument("depth q must be >= 0");
  const Eigen::MatrixXd omega = gaussian_test_matrix(a.dim(), ell, seed);
  EigEstimate est = estimate_max_eig(a, omega, q);
  est.seed = seed;
  return est;
}

EigEstimate estimate_min_eig(const MatrixOperator& a,
                             const Eigen::Ref<const Eigen::MatrixXd>& b, int q) {
  EigEstimate est = estimate_max_eig(a.negated(), b, q);
  est.xi = -est.xi;
  return est;
}

EigEstimate estimate_min_eig(const MatrixOperator& a, Eigen::Index ell, int q,
                             std::uint64_t seed) {
  EigEstimate est = estimate_max_eig(a.negated(), ell, q, seed);
  est.xi = -est.xi;
  return est;
}

EigEstimate estimate_spectral_norm_sq(const Eigen::MatrixXd& c, Eigen::Index ell,
                                      int q, std::uint64_t seed) {
  return estimate_max_eig(MatrixOperator::gram(c), ell, q, seed);
}

std::vector<double> ritz_values_by_depth(const MatrixOperator& a,
                                         const KrylovBasis& s, int q_max) {
  if (q_max < 0) throw std::invalid_argument("q_max must be >= 0");
  const Eigen::MatrixXd h = rayleigh_compress(a, s);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q_max) + 1);
  Eigen::Index last_cols = -1;
  double last = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    const Eigen::Index k = s.columns_through_depth(q);
    if (k != last_cols) {
      last = max_eigenvalue(h.topLeftCorner(k, k));
      last_cols = k;
    }
    out.push_back(last);
  }
  return out;
}

}  // namespace krylov
