#pragma once

namespace rbgk {

/// Exponentially scaled modified Bessel functions e^x K_nu(x), nu = 0, 1, 2.
struct ScaledBesselK {
  double k0;
  double k1;
  double k2;
};

/// Above this argument the asymptotic expansion replaces quadrature.
inline constexpr double kBesselAsymptoticSwitch = 300.0;

/// e^x K_nu(x) for nu = 0, 1, 2 at once. Throws a domain error for x <= 0.
ScaledBesselK scaled_bessel_k(double x);

/// Quadrature path only: trapezoidal rule on
///   e^x K_nu(x) = int_0^inf cosh(nu t) exp(-x (cosh t - 1)) dt,
/// which converges geometrically because the integrand is analytic in a strip.
ScaledBesselK scaled_bessel_k_quadrature(double x);

/// Asymptotic path only: sqrt(pi/2x) sum_k a_k(nu) / x^k, summed until the
/// terms stop decreasing or fall below double precision.
ScaledBesselK scaled_bessel_k_asymptotic(double x);

/// K_1(beta) = int_0^inf exp(-beta sqrt(1 + r^2)) dr.
double bessel_k1(double beta);

/// K_2(beta) = int_0^inf (2r^2 + 1)/sqrt(1 + r^2) exp(-beta sqrt(1 + r^2)) dr.
double bessel_k2(double beta);

/// K_1 and K_2 at one argument. Both underflow to zero past beta ~ 745; use
/// the scaled form when the ratio is what matters.
struct BesselEval {
  double beta;
  double k1;
  double k2;
};

BesselEval evaluate_bessel(double beta);

/// K_1(x)/K_2(x), strictly increasing from 0 to 1.
double bessel_ratio_k1_k2(double x);

/// Inverse of bessel_ratio_k1_k2 on (0, 1).
double invert_bessel_ratio_k1_k2(double ratio);

/// The rest-frame Juttner integrals of one species
///   M(bt)       = int exp(-c bt p0) dp       = 4 pi (cm)^3 K_2(x)/x
///   M_tilde(bt) = int exp(-c bt p0) dp / p0  = 4 pi (cm)^2 K_1(x)/x
/// with x = m c^2 bt. The logarithms are always finite; M and M_tilde
/// themselves underflow for x beyond ~700.
struct EquilibriumIntegrals {
  double M;
  double M_tilde;
  double log_M;
  double log_M_tilde;
  double ratio;  // M / M_tilde = cm K_2(x)/K_1(x), never underflows
};

EquilibriumIntegrals equilibrium_integrals(double mass, double beta_tilde, double c);

/// M/M_tilde alone.
double moment_ratio(double mass, double beta_tilde, double c);

/// d(M/M_tilde)/d(bt) from the Holder-form identity
///   c (M^2 - M_tilde int p0 exp(-c bt p0) dp) / M_tilde^2
/// written through K_1, K_2.
double moment_ratio_derivative(double mass, double beta_tilde, double c);

/// Central finite difference of M/M_tilde in bt with step 1e-5 bt.
/// Strictly negative for all valid inputs.
double ratio_derivative_sign(double mass, double beta_tilde, double c);

}  // namespace rbgk
