#pragma once

namespace krylov {

/// Chebyshev polynomial of the first kind. Three-term recurrence on
/// [-1, 1]; cosh(p * acosh|s|) with the sign of s^p outside.
double cheb_T(int p, double s);

/// Chebyshev polynomial of the second kind. Recurrence on [-1, 1];
/// sinh((p+1) t) / sinh(t), t = acosh|s|, outside.
double cheb_U(int p, double s);

/// log T_p(s) and log U_p(s) for s >= 1, finite even where the values
/// themselves overflow a double.
double log_cheb_T(int p, double s);
double log_cheb_U(int p, double s);

/// Chebyshev polynomial of the fourth kind, W_k(cos 2θ) = sin((2k+1)θ)/sin θ.
/// Satisfies U_{2k}(u) = W_k(2u^2 - 1), which extends U_{2k}(sqrt(x)) to x < 0.
double cheb_W(int k, double c);

/// delta(beta) = (1 - sqrt(1-beta)) / (1 + sqrt(1-beta)), evaluated as
/// beta / (1 + sqrt(1-beta))^2. Throws std::domain_error unless 0 <= beta <= 1.
double attenuation_delta(double beta);

/// s^q1 T_q2(2s/beta - 1) / T_q2(2/beta - 1). Equals 1 at s = 1.
/// Throws std::domain_error unless 0 < beta <= 1 and q1, q2 >= 0.
double phi_poly(double beta, int q1, int q2, double s);

/// s^q1 U_{2 q2}(sqrt(s/beta)) / U_{2 q2}(sqrt(1/beta)), continued to s < 0
/// through the even-polynomial identity. Equals 1 at s = 1.
double psi_poly(double beta, int q1, int q2, double s);

}  // namespace krylov
