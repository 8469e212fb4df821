#include "krylov/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace krylov {
namespace {

void require_degree(int p) {
  if (p < 0) throw std::domain_error("Chebyshev degree must be >= 0");
}

double odd_sign(int p, double s) { return (s < 0.0 && (p % 2 == 1)) ? -1.0 : 1.0; }

// log sinh(x) for x > 0. Direct for small x, where the expansion around
// e^x would cancel.
double log_sinh(double x) {
  if (x < 1.0) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

double log_cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

void require_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::domain_error("polynomial parameter beta must lie in (0, 1]");
  }
}

}  // namespace

double cheb_T(int p, double s) {
  require_degree(p);
  if (std::abs(s) <= 1.0) {
    if (p == 0) return 1.0;
    double prev = 1.0, cur = s;
    for (int k = 1; k < p; ++k) {
      const double next = 2.0 * s * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  const double t = std::acosh(std::abs(s));
  return odd_sign(p, s) * std::cosh(p * t);
}

double cheb_U(int p, double s) {
  require_degree(p);
  if (std::abs(s) <= 1.0) {
    if (p == 0) return 1.0;
    double prev = 1.0, cur = 2.0 * s;
    for (int k = 1; k < p; ++k) {
      const double next = 2.0 * s * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  const double t = std::acosh(std::abs(s));
  return odd_sign(p, s) * std::sinh((p + 1) * t) / std::sinh(t);
}

double log_cheb_T(int p, double s) {
  require_degree(p);
  if (!(s >= 1.0)) throw std::domain_error("log_cheb_T requires s >= 1");
  if (s == 1.0 || p == 0) return 0.0;
  return log_cosh(p * std::acosh(s));
}

double log_cheb_U(int p, double s) {
  require_degree(p);
  if (!(s >= 1.0)) throw std::domain_error("log_cheb_U requires s >= 1");
  if (s == 1.0) return std::log(static_cast<double>(p) + 1.0);
  if (p == 0) return 0.0;
  const double t = std::acosh(s);
  return log_sinh((p + 1) * t) - log_sinh(t);
}

double cheb_W(int k, double c) {
  require_degree(k);
  if (k == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * c + 1.0;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double attenuation_delta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::domain_error("attenuation factor requires beta in [0, 1]");
  }
  const double r = std::sqrt(1.0 - beta);
  return beta / ((1.0 + r) * (1.0 + r));
}

double phi_poly(double beta, int q1, int q2, double s) {
  require_beta(beta);
  if (q1 < 0 || q2 < 0) throw std::domain_error("partition entries must be >= 0");
  const double x0 = 2.0 / beta - 1.0;
  const double x = 2.0 * s / beta - 1.0;
  const double log_den = log_cheb_T(q2, x0);
  double ratio = 0.0;
  if (std::abs(x) >= 1.0) {
    ratio = odd_sign(q2, x) * std::exp(log_cheb_T(q2, std::abs(x)) - log_den);
  } else {
    ratio = cheb_T(q2, x) * std::exp(-log_den);
  }
  return std::pow(s, q1) * ratio;
}

double psi_poly(double beta, int q1, int q2, double s) {
  require_beta(beta);
  if (q1 < 0 || q2 < 0) throw std::domain_error("partition entries must be >= 0");
  const double u0 = std::sqrt(1.0 / beta);
  const double log_den = log_cheb_U(2 * q2, u0);
  const double x = s / beta;
  double ratio = 0.0;
  if (x >= 1.0) {
    ratio = std::exp(log_cheb_U(2 * q2, std::sqrt(x)) - log_den);
  } else if (x >= 0.0) {
    ratio = cheb_U(2 * q2, std::sqrt(x)) * std::exp(-log_den);
  } else {
    ratio = cheb_W(q2, 2.0 * x - 1.0) * std::exp(-log_den);
  }
  return std::pow(s, q1) * ratio;
}

}  // namespace krylov
