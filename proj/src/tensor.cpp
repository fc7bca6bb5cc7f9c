#include "rbgk/tensor.hpp"

#include <cmath>
#include <sstream>

#include "rbgk/error.hpp"

namespace rbgk {

double FourVector::spatial_norm() const { return std::sqrt(spatial_norm2()); }

FourVector& FourVector::operator+=(const FourVector& o) {
  for (std::size_t i = 0; i < 4; ++i) v[i] += o.v[i];
  return *this;
}

FourVector& FourVector::operator-=(const FourVector& o) {
  for (std::size_t i = 0; i < 4; ++i) v[i] -= o.v[i];
  return *this;
}

FourVector& FourVector::operator*=(double s) {
  for (auto& x : v) x *= s;
  return *this;
}

FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
FourVector operator*(double s, FourVector a) { return a *= s; }
FourVector operator*(FourVector a, double s) { return a *= s; }
FourVector operator/(FourVector a, double s) { return a *= 1.0 / s; }

double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

FourVector four_velocity_from_spatial(double ux, double uy, double uz, double c) {
  return {std::sqrt(c * c + ux * ux + uy * uy + uz * uz), ux, uy, uz};
}

FourVector four_velocity_from_velocity(double vx, double vy, double vz, double c) {
  const double beta2 = (vx * vx + vy * vy + vz * vz) / (c * c);
  if (!(beta2 < 1.0)) fail(ErrorCategory::domain, "flow velocity must be below c");
  const double gamma = 1.0 / std::sqrt(1.0 - beta2);
  return {gamma * c, gamma * vx, gamma * vy, gamma * vz};
}

FourVector on_shell_momentum(double px, double py, double pz, double mass, double c) {
  const double cm = c * mass;
  return {std::sqrt(cm * cm + px * px + py * py + pz * pz), px, py, pz};
}

Matrix4 identity4() {
  Matrix4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

double determinant(const Matrix4& a) {
  // Gaussian elimination with partial pivoting on a copy.
  Matrix4 m = a;
  double det = 1.0;
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

FourVector LorentzBoost::operator()(const FourVector& a) const {
  FourVector r;
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += matrix[i][j] * a[j];
    r[i] = s;
  }
  return r;
}

FourVector apply_boost(const LorentzBoost& boost, const FourVector& a) { return boost(a); }

LorentzBoost boost_to_rest_frame(const FourVector& U, double c) {
  if (!(c > 0.0)) fail(ErrorCategory::domain, "speed of light must be positive");
  const double norm = minkowski_dot(U, U) / (c * c);
  if (!(std::abs(norm - 1.0) <= 1e-8) || !(U[0] > 0.0)) {
    std::ostringstream os;
    os << "not a future-directed four-velocity: U.U/c^2 = " << norm;
    fail(ErrorCategory::domain, os.str());
  }
  const double u1 = U[1] / c, u2 = U[2] / c, u3 = U[3] / c;
  const double s2 = u1 * u1 + u2 * u2 + u3 * u3;
  LorentzBoost boost;
  if (std::sqrt(s2) < 1e-14) return boost;

  // gamma from the spatial part keeps the boost exact even when U^0 carries
  // quadrature rounding; (gamma - 1)/|u|^2 = 1/(gamma + 1).
  const double gamma = std::sqrt(1.0 + s2);
  const std::array<double, 3> u{u1, u2, u3};
  auto& m = boost.matrix;
  m[0][0] = gamma;
  for (std::size_t j = 0; j < 3; ++j) {
    m[0][j + 1] = -u[j];
    m[j + 1][0] = -u[j];
    for (std::size_t k = 0; k < 3; ++k)
      m[j + 1][k + 1] = (j == k ? 1.0 : 0.0) + u[j] * u[k] / (gamma + 1.0);
  }
  return boost;
}

void PhysicalConstants::validate() const {
  if (!(c > 0.0) || !(k > 0.0) || !(h > 0.0))
    fail(ErrorCategory::domain, "physical constants c, k, h must be strictly positive");
}

}  // namespace rbgk
