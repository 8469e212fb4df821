#include "oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace krylov::oracle {

MatrixXl reference_krylov_basis(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int q,
                                long double rank_tol) {
  const Eigen::Index n = a.rows();
  const Eigen::Index ell = b.cols();
  const MatrixXl al = a.cast<long double>();
  MatrixXl stacked(n, (q + 1) * ell);
  MatrixXl block = b.cast<long double>();
  for (int t = 0; t <= q; ++t) {
    if (t > 0) block = al * block;
    for (Eigen::Index j = 0; j < ell; ++j) {
      const long double norm = block.col(j).norm();
      if (norm > 0) block.col(j) /= norm;
    }
    stacked.middleCols(t * ell, ell) = block;
  }
  Eigen::ColPivHouseholderQR<MatrixXl> qr(stacked);
  qr.setThreshold(rank_tol);
  const Eigen::Index rank = qr.rank();
  MatrixXl q_full = qr.householderQ();
  return q_full.leftCols(rank);
}

Projection brute_force_xi(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int q,
                          long double rank_tol) {
  const MatrixXl s = reference_krylov_basis(a, b, q, rank_tol);
  MatrixXl h = s.transpose() * a.cast<long double>() * s;
  h = (h + h.transpose()).eval() / 2;
  Eigen::SelfAdjointEigenSolver<MatrixXl> eig(h, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().maxCoeff(), s.cols()};
}

double max_principal_angle_sin(const MatrixXl& q1, const MatrixXl& q2) {
  if (q1.cols() != q2.cols()) return 1.0;
  if (q1.cols() == 0) return 0.0;
  const MatrixXl residual = q2 - q1 * (q1.transpose() * q2);
  Eigen::JacobiSVD<MatrixXl> svd(residual);
  return static_cast<double>(svd.singularValues()(0));
}

long double lambda_max(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXl> eig(a.cast<long double>(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

long double lambda_min(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXl> eig(a.cast<long double>(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace krylov::oracle
