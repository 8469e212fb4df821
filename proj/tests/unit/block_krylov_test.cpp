#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "cases.hpp"
#include "krylov/block_krylov.hpp"
#include "krylov/rng.hpp"
#include "oracle.hpp"
#include "properties.hpp"

using krylov::MatrixOperator;
using krylov::testcases::CaseRng;

namespace {

double orthonormality_defect(const Eigen::MatrixXd& s) {
  return (s.transpose() * s - Eigen::MatrixXd::Identity(s.cols(), s.cols())).cwiseAbs().maxCoeff();
}

TEST(KrylovBasis, IdentityDeflatesToRangeOfB) {
  const auto a = MatrixOperator::diagonal(Eigen::VectorXd::Ones(6));
  const Eigen::MatrixXd b = krylov::gaussian_test_matrix(6, 3, 1);
  const auto s = krylov::build_krylov_basis(a, b, 3);
  EXPECT_EQ(s.columns(), 3);
  EXPECT_TRUE(s.deflated);
  EXPECT_TRUE(s.invariant);
  EXPECT_EQ(s.depth_built, 0);
  EXPECT_EQ(s.first_deflation_depth, 1);
  EXPECT_EQ(s.columns_through_depth(3), 3);
}

TEST(KrylovBasis, RankDeficientBlockKeepsRank) {
  const auto a = MatrixOperator::diagonal(Eigen::VectorXd::Ones(5));
  Eigen::MatrixXd b = krylov::gaussian_test_matrix(5, 3, 2);
  b.col(2) = 2.0 * b.col(0) - b.col(1);
  const auto s = krylov::build_krylov_basis(a, b, 3);
  EXPECT_EQ(s.columns(), 2);
  EXPECT_TRUE(s.deflated);
  EXPECT_EQ(s.first_deflation_depth, 0);
}

TEST(KrylovBasis, TwoByTwoHandGramSchmidt) {
  const auto a = MatrixOperator::diagonal(Eigen::Vector2d(1.0, 0.0));
  const auto s = krylov::build_krylov_basis(a, Eigen::Vector2d(1.0, 1.0), 1);
  ASSERT_EQ(s.columns(), 2);
  EXPECT_FALSE(s.deflated);
  EXPECT_LE(orthonormality_defect(s.basis), 1e-15);
  // First column is (1, 1)/sqrt 2; second is the residual of (1, 0).
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s.basis(0, 0), r, 1e-15);
  EXPECT_NEAR(s.basis(1, 0), r, 1e-15);
  EXPECT_NEAR(std::abs(s.basis(0, 1)), r, 1e-15);
  EXPECT_NEAR(s.basis(0, 1), -s.basis(1, 1), 1e-15);
}

TEST(KrylovBasis, SpanMatchesStackedReference) {
  CaseRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a =
        krylov::testcases::random_symmetric(rng, krylov::testcases::random_eigenvalues(rng, 8));
    const Eigen::MatrixXd b = krylov::testcases::gaussian(rng, 8, 2);
    const auto s = krylov::build_krylov_basis(MatrixOperator::dense(a), b, 2);
    ASSERT_EQ(s.columns(), 6);
    EXPECT_LE(orthonormality_defect(s.basis), 1e-14);
    const auto ref = krylov::oracle::reference_krylov_basis(a, b, 2);
    EXPECT_LT(krylov::oracle::max_principal_angle_sin(ref, s.basis.cast<long double>()), 1e-10)
        << trial;

    // Rayleigh quotient maximum agrees with the dense projection.
    const double xi = krylov::max_eigenvalue(krylov::rayleigh_compress(MatrixOperator::dense(a), s));
    EXPECT_NEAR(xi, static_cast<double>(krylov::oracle::brute_force_xi(a, b, 2).xi), 1e-12);
  }
}

TEST(KrylovBasis, BlockBoundariesAndDepthLookup) {
  const auto a = MatrixOperator::diagonal(Eigen::VectorXd::LinSpaced(20, 0.0, 1.0));
  const auto s = krylov::build_krylov_basis(a, krylov::gaussian_test_matrix(20, 3, 5), 4);
  EXPECT_EQ(s.block_boundaries, (std::vector<Eigen::Index>{0, 3, 6, 9, 12, 15}));
  EXPECT_EQ(s.depth_built, 4);
  EXPECT_FALSE(s.invariant);
  EXPECT_EQ(s.columns_through_depth(0), 3);
  EXPECT_EQ(s.columns_through_depth(4), 15);
  EXPECT_THROW((void)s.columns_through_depth(5), std::invalid_argument);
  EXPECT_THROW((void)s.columns_through_depth(-1), std::invalid_argument);
}

TEST(KrylovBasis, FillsWholeSpace) {
  CaseRng rng(22);
  const Eigen::MatrixXd a =
      krylov::testcases::random_symmetric(rng, krylov::testcases::random_eigenvalues(rng, 6));
  const auto s = krylov::build_krylov_basis(MatrixOperator::dense(a),
                                            krylov::testcases::gaussian(rng, 6, 4), 5);
  EXPECT_EQ(s.columns(), 6);
  EXPECT_TRUE(s.deflated);
  EXPECT_TRUE(s.invariant);
  EXPECT_LE(orthonormality_defect(s.basis), 1e-13);
}

TEST(KrylovBasis, RejectsBadArguments) {
  const auto a = MatrixOperator::diagonal(Eigen::Vector3d(1, 2, 3));
  EXPECT_THROW(krylov::build_krylov_basis(a, Eigen::MatrixXd::Ones(3, 1), -1),
               std::invalid_argument);
  EXPECT_THROW(krylov::build_krylov_basis(a, Eigen::MatrixXd::Ones(2, 1), 1),
               std::invalid_argument);
  EXPECT_THROW(krylov::build_krylov_basis(a, Eigen::MatrixXd::Zero(3, 2), 1),
               std::invalid_argument);
}

TEST(RayleighCompress, CanonicalBasisGivesLeadingBlock) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(5, 5.0, 1.0);
  krylov::KrylovBasis s;
  s.basis = Eigen::MatrixXd::Identity(5, 3);
  s.block_boundaries = {0, 3};
  const Eigen::MatrixXd h = krylov::rayleigh_compress(MatrixOperator::diagonal(d), s);
  EXPECT_EQ(h, Eigen::MatrixXd(d.head(3).asDiagonal()));
}

TEST(EstimateMaxEig, IdentityMultipleIsExact) {
  const auto a = MatrixOperator::diagonal(Eigen::VectorXd::Constant(30, 2.5));
  for (int ell : {1, 3}) {
    for (int q : {0, 1, 4}) {
      EXPECT_NEAR(krylov::estimate_max_eig(a, ell, q, 7).xi, 2.5, 1e-14);
    }
  }
}

TEST(EstimateMaxEig, TwoDistinctEigenvaluesSolvedAtDepthOne) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(40);
  d.head(13).setConstant(1.0);
  const auto a = MatrixOperator::diagonal(d);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto est = krylov::estimate_max_eig(a, 1, 1, seed);
    EXPECT_LT(1.0 - est.xi, 1e-10) << seed;
    EXPECT_EQ(est.seed, seed);
    EXPECT_EQ(est.q, 1);
    EXPECT_EQ(est.ell, 1);
  }
}

TEST(EstimateMaxEig, RitzVectorIsUnitAndConsistent) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(50, 1.0, 0.0);
  const auto a = MatrixOperator::diagonal(d);
  const auto est = krylov::estimate_max_eig(a, 2, 5, 3);
  EXPECT_NEAR(est.ritz_vector.norm(), 1.0, 1e-14);
  const double rq = est.ritz_vector.dot(a.apply(est.ritz_vector).col(0));
  EXPECT_NEAR(rq, est.xi, 1e-13);
}

TEST(EstimateMaxEig, RitzVectorCapturesTopInvariantSubspace) {
  // ||P_{>lambda} v||^2 >= (xi - lambda)/(lambda_max - lambda) for lambda < xi.
  CaseRng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(5, 60);
    const int distinct = rng.integer(1, 4);
    const Eigen::VectorXd d = krylov::testcases::random_eigenvalues(rng, n, distinct == 1 ? 0 : distinct);
    const auto est = krylov::estimate_max_eig(MatrixOperator::diagonal(d), rng.integer(1, 3),
                                              rng.integer(0, 6), rng.seed());
    const double lmax = d.maxCoeff();
    for (double frac : {0.0, 0.3, 0.7, 0.95}) {
      const double lambda = d.minCoeff() + frac * (est.xi - d.minCoeff());
      if (lambda >= est.xi) continue;
      double mass = 0.0;
      for (int i = 0; i < n; ++i) {
        if (d(i) > lambda) mass += est.ritz_vector(i) * est.ritz_vector(i);
      }
      EXPECT_GE(mass, (est.xi - lambda) / (lmax - lambda) - 1e-12) << trial;
    }
  }
}

TEST(EstimateMaxEig, DepthMonotoneAtFixedSeed) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(200, 1.0, 0.0).array().pow(3.0);
  const auto a = MatrixOperator::diagonal(d);
  double previous = -INFINITY;
  for (int q = 0; q <= 12; ++q) {
    const double xi = krylov::estimate_max_eig(a, 2, q, 11).xi;
    EXPECT_GE(xi, previous - 1e-12) << q;
    previous = xi;
  }
}

TEST(EstimateMaxEig, NestedDepthSweepMatchesSeparateBuilds) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(120, 1.0, 0.0).array().pow(2.0);
  const auto a = MatrixOperator::diagonal(d);
  const Eigen::MatrixXd omega = krylov::gaussian_test_matrix(120, 3, 13);
  const auto s = krylov::build_krylov_basis(a, omega, 10);
  const auto swept = krylov::ritz_values_by_depth(a, s, 10);
  ASSERT_EQ(swept.size(), 11u);
  for (int q = 0; q <= 10; ++q) {
    EXPECT_NEAR(swept[static_cast<std::size_t>(q)], krylov::estimate_max_eig(a, omega, q).xi,
                1e-13)
        << q;
  }
}

TEST(EstimateMaxEig, NestedSweepBeyondInvariantDepth) {
  Eigen::VectorXd d(12);
  d << 3, 3, 3, 2, 2, 2, 1, 1, 1, 1, 0, 0;
  const auto a = MatrixOperator::diagonal(d);
  const auto s = krylov::build_krylov_basis(a, krylov::gaussian_test_matrix(12, 1, 3), 8);
  EXPECT_TRUE(s.invariant);
  EXPECT_EQ(s.columns(), 4);
  const auto swept = krylov::ritz_values_by_depth(a, s, 8);
  for (int q = 3; q <= 8; ++q) EXPECT_NEAR(swept[static_cast<std::size_t>(q)], 3.0, 1e-12);
}

TEST(EstimateMinEig, NegationReduction) {
  const auto a = MatrixOperator::diagonal(Eigen::Vector2d(1.0, 0.0));
  EXPECT_NEAR(krylov::estimate_min_eig(a, 1, 1, 5).xi, 0.0, 1e-14);

  CaseRng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(3, 40);
    const Eigen::VectorXd ev = krylov::testcases::random_eigenvalues(rng, n);
    const Eigen::MatrixXd a0 = krylov::testcases::random_symmetric(rng, ev);
    const int ell = rng.integer(1, std::min(n, 3));
    const int q = rng.integer(0, 5);
    const std::uint64_t seed = rng.seed();
    const auto op = MatrixOperator::dense(a0);
    const double lo = krylov::estimate_min_eig(op, ell, q, seed).xi;
    EXPECT_GE(lo, ev.minCoeff() - 1e-12) << trial;

    const double alpha = rng.uniform(0.1, 10.0), beta = rng.uniform(-2.0, 2.0);
    const Eigen::MatrixXd shifted = alpha * a0 + beta * Eigen::MatrixXd::Identity(n, n);
    const double mapped = krylov::estimate_min_eig(MatrixOperator::dense(shifted), ell, q, seed).xi;
    EXPECT_NEAR(mapped, alpha * lo + beta, 1e-10) << trial;
  }
}

TEST(EstimateSpectralNorm, ExamplesAndOracle) {
  Eigen::MatrixXd c = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto est = krylov::estimate_spectral_norm_sq(c, 1, 1, seed);
    EXPECT_LE(est.xi, 9.0 * (1 + 1e-15));
    EXPECT_LT((9.0 - est.xi) / 8.0, 1e-10);
  }

  CaseRng rng(25);
  const Eigen::MatrixXd rows = krylov::testcases::random_orthogonal(rng, 7).topRows(3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_NEAR(krylov::estimate_spectral_norm_sq(rows, 1, 0, seed).xi, 1.0, 1e-14);
  }

  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd g = krylov::testcases::gaussian(rng, 20, 50);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(g).singularValues()(0);
    const auto est = krylov::estimate_spectral_norm_sq(g, 2, rng.integer(0, 6), rng.seed());
    EXPECT_LE(est.xi, sigma * sigma * (1 + 1e-13)) << trial;
    EXPECT_GT(est.xi, 0.0);
  }
}

// Smaller versions of the acceptance property suites.
TEST(KrylovProperties, Sandwich) {
  const auto r = krylov::properties::sandwich_suite(40, 101);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(KrylovProperties, DepthMonotonicity) {
  const auto r = krylov::properties::depth_monotonicity_suite(40, 102);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(KrylovProperties, RangeInvariance) {
  const auto r = krylov::properties::range_invariance_suite(40, 103);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(KrylovProperties, RotationInvariance) {
  const auto r = krylov::properties::rotation_invariance_suite(40, 104);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(KrylovProperties, AffineCovariance) {
  const auto r = krylov::properties::affine_covariance_suite(40, 105);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(KrylovProperties, OracleEquivalence) {
  const auto r = krylov::properties::oracle_equivalence_suite(60, 106);
  EXPECT_TRUE(r.passed()) << r.first_failure;
  EXPECT_GT(r.deflated_cases, 0);
}

}  // namespace
