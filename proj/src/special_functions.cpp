#include "rbgk/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rbgk/error.hpp"
#include "rbgk/root_finding.hpp"

namespace rbgk {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << value;
    fail(ErrorCategory::domain, os.str());
  }
}

double asymptotic_series(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 64; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;  // series has started to diverge
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

}  // namespace

ScaledBesselK scaled_bessel_k_quadrature(double x) {
  require_positive(x, "Bessel argument");
  // Step resolves the Gaussian core of width 1/sqrt(x) at large x and stays
  // well inside the analyticity strip |Im t| < pi/2 at small x.
  const double h = std::min(0.25, 0.5 / std::sqrt(x));
  double s0 = 0.5, s1 = 0.5, s2 = 0.5;
  for (int j = 1;; ++j) {
    const double t = j * h;
    const double sh = std::sinh(0.5 * t);
    const double exponent = 2.0 * x * sh * sh;  // x (cosh t - 1)
    const double e = std::exp(-exponent);
    s0 += e;
    s1 += std::cosh(t) * e;
    s2 += std::cosh(2.0 * t) * e;
    // cosh(2t) e^{-exponent} <= e^{2t - exponent} < 1e-18 while every sum >= 1/2.
    if (exponent - 2.0 * t > 42.0) break;
  }
  return {h * s0, h * s1, h * s2};
}

ScaledBesselK scaled_bessel_k_asymptotic(double x) {
  require_positive(x, "Bessel argument");
  return {asymptotic_series(0.0, x), asymptotic_series(1.0, x), asymptotic_series(2.0, x)};
}

ScaledBesselK scaled_bessel_k(double x) {
  return x > kBesselAsymptoticSwitch ? scaled_bessel_k_asymptotic(x)
                                     : scaled_bessel_k_quadrature(x);
}

double bessel_k1(double beta) { return scaled_bessel_k(beta).k1 * std::exp(-beta); }

double bessel_k2(double beta) { return scaled_bessel_k(beta).k2 * std::exp(-beta); }

BesselEval evaluate_bessel(double beta) {
  const ScaledBesselK k = scaled_bessel_k(beta);
  const double e = std::exp(-beta);
  return {beta, k.k1 * e, k.k2 * e};
}

double bessel_ratio_k1_k2(double x) {
  const ScaledBesselK k = scaled_bessel_k(x);
  return k.k1 / k.k2;
}

double invert_bessel_ratio_k1_k2(double ratio) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    std::ostringstream os;
    os << "K1/K2 ratio must lie in (0, 1), got " << ratio;
    fail(ErrorCategory::domain, os.str());
  }
  // 1/x <= K2/K1 <= 1 + 2/x brackets the root; widen by a factor two each side.
  const double q = 1.0 / ratio;
  const double lo = std::log(0.5 / q);
  const double hi = std::log(4.0 / (q - 1.0));
  auto g = [ratio](double y) -> ValueSlope {
    const double x = std::exp(y);
    const ScaledBesselK k = scaled_bessel_k(x);
    const double value = k.k1 / k.k2 - ratio;
    const double dratio = -(k.k2 * k.k2 - k.k1 * k.k1 - 3.0 * k.k1 * k.k2 / x) / (k.k2 * k.k2);
    return {value, x * dratio};
  };
  RootOptions options;
  options.value_tol = 1e-15;
  options.x_tol = 1e-15;
  options.x_floor = 1.0;
  return std::exp(find_root_bracketed(g, lo, hi, options).x);
}

EquilibriumIntegrals equilibrium_integrals(double mass, double beta_tilde, double c) {
  require_positive(mass, "mass");
  require_positive(beta_tilde, "beta_tilde");
  require_positive(c, "c");
  const double cm = c * mass;
  const double x = mass * c * c * beta_tilde;
  const ScaledBesselK k = scaled_bessel_k(x);
  const double log4pi = std::log(4.0 * std::numbers::pi);
  EquilibriumIntegrals r{};
  r.log_M = log4pi + 3.0 * std::log(cm) + std::log(k.k2) - x - std::log(x);
  r.log_M_tilde = log4pi + 2.0 * std::log(cm) + std::log(k.k1) - x - std::log(x);
  r.M = std::exp(r.log_M);
  r.M_tilde = std::exp(r.log_M_tilde);
  r.ratio = cm * k.k2 / k.k1;
  return r;
}

double moment_ratio(double mass, double beta_tilde, double c) {
  return equilibrium_integrals(mass, beta_tilde, c).ratio;
}

double moment_ratio_derivative(double mass, double beta_tilde, double c) {
  require_positive(mass, "mass");
  require_positive(beta_tilde, "beta_tilde");
  require_positive(c, "c");
  const double x = mass * c * c * beta_tilde;
  const ScaledBesselK k = scaled_bessel_k(x);
  // With K_1' = -K_0 - K_1/x, K_2' = -K_1 - 2K_2/x and K_0 = K_2 - 2K_1/x:
  //   d(K_2/K_1)/dx = (K_2^2 - K_1^2 - 3 K_1 K_2 / x) / K_1^2.
  const double cm = c * mass;
  return c * cm * cm * (k.k2 * k.k2 - k.k1 * k.k1 - 3.0 * k.k1 * k.k2 / x) / (k.k1 * k.k1);
}

double ratio_derivative_sign(double mass, double beta_tilde, double c) {
  require_positive(beta_tilde, "beta_tilde");
  const double step = 1e-5 * beta_tilde;
  return (moment_ratio(mass, beta_tilde + step, c) - moment_ratio(mass, beta_tilde - step, c)) /
         (2.0 * step);
}

}  // namespace rbgk
