#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cases.hpp"
#include "krylov/block_krylov.hpp"
#include "oracle.hpp"

namespace krylov::properties {
namespace {

using testcases::CaseRng;

struct Instance {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  int q = 0;
  double lmax = 0.0;
  double lmin = 0.0;
  double rho() const { return std::max(lmax - lmin, 1e-300); }
};

// Half the instances have at most six distinct eigenvalues (deflating,
// invariant subspaces).
Instance draw(CaseRng& rng, int max_n, int max_q) {
  Instance in;
  const int n = rng.integer(2, max_n);
  const int distinct = rng.integer(0, 1) ? rng.integer(2, std::min(n, 6)) : 0;
  const Eigen::VectorXd eigenvalues = testcases::random_eigenvalues(rng, n, distinct);
  in.a = testcases::random_symmetric(rng, eigenvalues);
  const int ell = rng.integer(1, std::min(n, 6));
  in.b = testcases::gaussian(rng, n, ell);
  in.q = rng.integer(0, max_q);
  in.lmax = eigenvalues.maxCoeff();
  in.lmin = eigenvalues.minCoeff();
  return in;
}

double xi(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int q) {
  return estimate_max_eig(MatrixOperator::dense(a), b, q).xi;
}

std::string describe(int index, const Instance& in, double deviation) {
  std::ostringstream s;
  s << "case " << index << " (n=" << in.a.rows() << ", ell=" << in.b.cols() << ", q=" << in.q
    << "): deviation " << deviation << " rho";
  return s.str();
}

// Runs `check` on each instance; it returns the deviation in units of rho.
SuiteResult run(int cases, std::uint64_t seed, int max_n, int max_q, double tol,
                const std::function<double(Instance&, CaseRng&)>& check) {
  CaseRng rng(seed);
  SuiteResult r;
  for (int i = 0; i < cases; ++i) {
    Instance in = draw(rng, max_n, max_q);
    const double deviation = check(in, rng);
    ++r.cases;
    const double ratio = deviation / tol;
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (!(ratio <= 1.0)) {
      if (r.failures == 0) r.first_failure = describe(i, in, deviation);
      ++r.failures;
    }
  }
  return r;
}

}  // namespace

SuiteResult sandwich_suite(int cases, std::uint64_t seed, int max_n) {
  return run(cases, seed, max_n, 10, kInvarianceTol, [](Instance& in, CaseRng&) {
    const double x = xi(in.a, in.b, in.q);
    return std::max({0.0, x - in.lmax, in.lmin - x}) / in.rho();
  });
}

SuiteResult depth_monotonicity_suite(int cases, std::uint64_t seed, int max_n) {
  return run(cases, seed, max_n, 8, kInvarianceTol, [](Instance& in, CaseRng&) {
    // One fresh build per depth.
    double worst = 0.0;
    double previous = xi(in.a, in.b, 0);
    for (int q = 1; q <= in.q + 1; ++q) {
      const double current = xi(in.a, in.b, q);
      worst = std::max(worst, previous - current);
      previous = current;
    }
    return worst / in.rho();
  });
}

SuiteResult range_invariance_suite(int cases, std::uint64_t seed, int max_n) {
  return run(cases, seed, max_n, 8, kInvarianceTol, [](Instance& in, CaseRng& rng) {
    const Eigen::MatrixXd t = testcases::random_nonsingular(rng, in.b.cols());
    return std::abs(xi(in.a, in.b * t, in.q) - xi(in.a, in.b, in.q)) / in.rho();
  });
}

SuiteResult rotation_invariance_suite(int cases, std::uint64_t seed, int max_n) {
  return run(cases, seed, max_n, 8, kInvarianceTol, [](Instance& in, CaseRng& rng) {
    const Eigen::MatrixXd u = testcases::random_orthogonal(rng, in.a.rows());
    Eigen::MatrixXd rotated = u * in.a * u.transpose();
    rotated = 0.5 * (rotated + rotated.transpose()).eval();
    return std::abs(xi(rotated, u * in.b, in.q) - xi(in.a, in.b, in.q)) / in.rho();
  });
}

SuiteResult affine_covariance_suite(int cases, std::uint64_t seed, int max_n) {
  int index = 0;
  return run(cases, seed, max_n, 8, kInvarianceTol, [&index](Instance& in, CaseRng& rng) {
    // Every tenth case uses alpha = 0, where the map collapses to beta * I.
    const double alpha = (index++ % 10 == 9) ? 0.0 : std::exp(rng.uniform(-2.0, 2.0));
    const double beta = rng.uniform(-3.0, 3.0);
    const Eigen::Index n = in.a.rows();
    const Eigen::MatrixXd shifted = alpha * in.a + beta * Eigen::MatrixXd::Identity(n, n);
    const double expected = alpha * xi(in.a, in.b, in.q) + beta;
    const double deviation = std::abs(xi(shifted, in.b, in.q) - expected);
    // Allowed: 1e-9 times the transformed range, plus rounding of the shift.
    const double allowed = kInvarianceTol * alpha * in.rho() + 1e-13 * std::abs(beta);
    return kInvarianceTol * deviation / std::max(allowed, 1e-300);
  });
}

OracleSuiteResult oracle_equivalence_suite(int cases, std::uint64_t seed, int max_n) {
  CaseRng rng(seed);
  OracleSuiteResult r;
  for (int i = 0; i < cases; ++i) {
    Instance in;
    const int kind = i % 3;
    // Generic spectra at modest depth, few distinct eigenvalues (deflation
    // once the space saturates), and tiny n with a full Krylov space.
    const int n = kind == 2 ? rng.integer(2, 8) : rng.integer(6, max_n);
    const int distinct = kind == 1 ? rng.integer(2, std::min(n - 1, 5)) : 0;
    const Eigen::VectorXd eigenvalues = testcases::random_eigenvalues(rng, n, distinct);
    in.a = testcases::random_symmetric(rng, eigenvalues);
    const int ell = kind == 2 ? rng.integer(1, n) : rng.integer(1, std::min(4, n / 3));
    in.b = testcases::gaussian(rng, n, ell);
    in.q = kind == 0 ? rng.integer(0, std::max(0, std::min(4, n / (2 * ell) - 1)))
                     : rng.integer(1, 6);
    in.lmax = eigenvalues.maxCoeff();
    in.lmin = eigenvalues.minCoeff();

    const auto op = MatrixOperator::dense(in.a);
    const EigEstimate est = estimate_max_eig(op, in.b, in.q);
    const oracle::Projection ref = oracle::brute_force_xi(in.a, in.b, in.q);
    const KrylovBasis basis = build_krylov_basis(op, in.b, in.q);
    if (basis.deflated) ++r.deflated_cases;

    double deviation = std::abs(est.xi - static_cast<double>(ref.xi)) / in.rho();
    // A dimension disagreement is a failure regardless of xi.
    if (basis.columns() != ref.dim) deviation = std::max(deviation, 1.0);
    ++r.cases;
    const double ratio = deviation / kOracleTol;
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (!(ratio <= 1.0)) {
      if (r.failures == 0) {
        std::ostringstream s;
        s << describe(i, in, deviation) << ", dims " << basis.columns() << " vs " << ref.dim;
        r.first_failure = s.str();
      }
      ++r.failures;
    }
  }
  return r;
}

}  // namespace krylov::properties
