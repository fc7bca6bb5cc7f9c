#include <cmath>
#include <random>

#include "doctest.h"
#include "rbgk/error.hpp"
#include "rbgk/tensor.hpp"

using namespace rbgk;

namespace {

FourVector random_velocity(std::mt19937_64& rng, double c, double max_speed) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double vx, vy, vz;
  do {
    vx = u(rng);
    vy = u(rng);
    vz = u(rng);
  } while (vx * vx + vy * vy + vz * vz >= 1.0);
  return four_velocity_from_velocity(max_speed * c * vx, max_speed * c * vy, max_speed * c * vz, c);
}

FourVector random_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

constexpr double eta[4] = {1.0, -1.0, -1.0, -1.0};

}  // namespace

TEST_CASE("minkowski dot of simple vectors") {
  CHECK(minkowski_dot({1, 0, 0, 0}, {1, 0, 0, 0}) == 1.0);
  const FourVector p = on_shell_momentum(0.3, 0.4, 0.0, 1.0, 1.0);
  CHECK(minkowski_dot(p, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(minkowski_dot({2, 1, 1, 1}, {3, 1, 2, 3}) == doctest::Approx(0.0));
}

TEST_CASE("boost at rest is the identity") {
  const LorentzBoost b = boost_to_rest_frame({2.5, 0, 0, 0}, 2.5);
  const Matrix4 id = identity4();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(b.matrix[i][j] == id[i][j]);
  const FourVector a{1.5, -0.2, 0.7, 3.0};
  const FourVector ba = apply_boost(LorentzBoost{}, a);
  for (std::size_t i = 0; i < 4; ++i) CHECK(ba[i] == a[i]);
}

TEST_CASE("boost maps the four-velocity to rest and preserves the metric") {
  std::mt19937_64 rng(7);
  for (double c : {1.0, 3.0, 0.5}) {
    for (int t = 0; t < 100; ++t) {
      const FourVector U = random_velocity(rng, c, 0.99);
      const LorentzBoost L = boost_to_rest_frame(U, c);
      const FourVector r = L(U);
      CHECK(std::abs(r[0] - c) <= 1e-10 * c);
      for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(r[i]) <= 1e-10 * c);
      // Lambda^T eta Lambda = eta
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += L.matrix[k][a] * eta[k] * L.matrix[k][b];
          CHECK(std::abs(s - (a == b ? eta[a] : 0.0)) <= 1e-12 * std::max(1.0, U[0] * U[0] / (c * c)));
        }
      CHECK(std::abs(std::abs(determinant(L.matrix)) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("boosts preserve inner products of random pairs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const FourVector U = random_velocity(rng, 1.0, 0.9);
    const LorentzBoost L = boost_to_rest_frame(U, 1.0);
    const FourVector a = random_vector(rng), b = random_vector(rng);
    const double before = minkowski_dot(a, b);
    const double after = minkowski_dot(L(a), L(b));
    const double scale = (std::abs(a[0]) + a.spatial_norm()) * (std::abs(b[0]) + b.spatial_norm()) * U[0] * U[0];
    CHECK(std::abs(after - before) <= 1e-12 * scale);
  }
}

TEST_CASE("boosted on-shell momentum stays on shell") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const double m = 0.5 + std::abs(u(rng));
    const FourVector p = on_shell_momentum(u(rng), u(rng), u(rng), m, 1.0);
    const FourVector P = boost_to_rest_frame(random_velocity(rng, 1.0, 0.95), 1.0)(p);
    CHECK(P[0] == doctest::Approx(std::sqrt(m * m + P.spatial_norm2())).epsilon(1e-12));
  }
}

TEST_CASE("boost from the reversed velocity is the inverse") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const FourVector U = random_velocity(rng, 1.0, 0.99);
    const FourVector V{U[0], -U[1], -U[2], -U[3]};
    const Matrix4 prod = multiply(boost_to_rest_frame(V, 1.0).matrix, boost_to_rest_frame(U, 1.0).matrix);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(std::abs(prod[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-10 * U[0] * U[0]);
  }
}

TEST_CASE("invalid four-velocities are rejected") {
  CHECK_THROWS_AS(boost_to_rest_frame({1.0, 0.5, 0, 0}, 1.0), Error);
  try {
    boost_to_rest_frame({2.0, 0, 0, 0}, 1.0);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::domain);
  }
  PhysicalConstants bad;
  bad.c = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
