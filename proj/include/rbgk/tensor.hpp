#pragma once

#include <array>
#include <cstddef>

namespace rbgk {

/// Contravariant Minkowski four-vector, index 0 is the time component.
/// Metric signature is (+,-,-,-).
struct FourVector {
  std::array<double, 4> v{};

  constexpr FourVector() = default;
  constexpr FourVector(double a0, double a1, double a2, double a3) : v{a0, a1, a2, a3} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr double time() const { return v[0]; }
  double spatial_norm() const;
  double spatial_norm2() const { return v[1] * v[1] + v[2] * v[2] + v[3] * v[3]; }

  FourVector& operator+=(const FourVector& o);
  FourVector& operator-=(const FourVector& o);
  FourVector& operator*=(double s);
};

FourVector operator+(FourVector a, const FourVector& b);
FourVector operator-(FourVector a, const FourVector& b);
FourVector operator*(double s, FourVector a);
FourVector operator*(FourVector a, double s);
FourVector operator/(FourVector a, double s);

/// a^mu b_mu = a0 b0 - a.b
double minkowski_dot(const FourVector& a, const FourVector& b);

/// Four-velocity (sqrt(c^2 + |u|^2), u) with the given spatial part.
FourVector four_velocity_from_spatial(double ux, double uy, double uz, double c);

/// Four-velocity of a flow moving with ordinary velocity v (|v| < c).
FourVector four_velocity_from_velocity(double vx, double vy, double vz, double c);

/// Mass-shell four-momentum (sqrt((cm)^2 + |p|^2), p).
FourVector on_shell_momentum(double px, double py, double pz, double mass, double c);

using Matrix4 = std::array<std::array<double, 4>, 4>;

Matrix4 identity4();
Matrix4 multiply(const Matrix4& a, const Matrix4& b);
double determinant(const Matrix4& a);

/// Pure Lorentz boost Lambda^mu_nu acting on contravariant components.
struct LorentzBoost {
  Matrix4 matrix = identity4();

  FourVector operator()(const FourVector& a) const;
};

FourVector apply_boost(const LorentzBoost& boost, const FourVector& a);

/// Pure boost taking the four-velocity U to (c, 0, 0, 0).
///
/// Built from u = U/c:
///   L00 = gamma, L0j = Lj0 = -u_j, Ljk = delta_jk + (gamma - 1) u_j u_k / |u|^2
/// with gamma = u^0. Returns the identity when |u| < 1e-14. Throws a domain
/// error if U^mu U_mu / c^2 differs from one by more than 1e-8.
LorentzBoost boost_to_rest_frame(const FourVector& U, double c);

/// Physical constants; the defaults are code units.
struct PhysicalConstants {
  double c = 1.0;
  double k = 1.0;
  double h = 1.0;

  /// Throws a domain error unless all constants are strictly positive.
  void validate() const;

  bool operator==(const PhysicalConstants&) const = default;
};

}  // namespace rbgk
