#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "rbgk/error.hpp"
#include "rbgk/phase_space.hpp"
#include "rbgk/special_functions.hpp"

using namespace rbgk;

namespace {

const PhysicalConstants units{};

std::vector<double> random_field(const MomentumGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(g.size());
  for (double& v : f) v = u(rng) < 0.3 ? 0.0 : u(rng);
  return f;
}

}  // namespace

TEST_CASE("species parameters validate") {
  CHECK_NOTHROW(SpeciesParams::make("a", 1.0, 1.0, 0.5).validate());
  CHECK(SpeciesParams::make("a", 1.0, 1.0, 1.5).degeneracy == 4.0);
  CHECK_THROWS_AS(SpeciesParams::make("a", 0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(SpeciesParams::make("a", 1.0, -1.0).validate(), Error);
  CHECK_THROWS_AS(SpeciesParams::make("a", 1.0, 1.0, -0.5).validate(), Error);
  SpeciesParams bad = SpeciesParams::make("a", 1.0, 1.0, 0.5);
  bad.degeneracy = 3.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("grid nodes lie on the mass shell and the tail is below tolerance") {
  const MomentumGrid g = MomentumGrid::for_juttner(20, 2.0, 1.5, 0.3, 0.5, 1e-10);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(g.p0(k) >= g.c() * g.mass());
    CHECK(g.p0(k) * g.p0(k) == doctest::Approx(2.25 * 4.0 + g.momentum(k).spatial_norm2()).epsilon(1e-14));
    CHECK(std::abs(g.velocity_x(k)) < g.c());
  }
  // Weight on the faces of the grid domain for a Juttner drifting along +x and -x.
  for (double v : {0.5, -0.5}) {
    const FourVector U = four_velocity_from_velocity(v, 0.0, 0.0, 1.5);
    const RestFrameExcess ex(U, 2.0, 1.5);
    double worst = 0.0;
    const double e = g.p_max();
    for (int i = 0; i < g.n_cells(); ++i)
      for (int j = 0; j < g.n_cells(); ++j) {
        const double a = g.axis(i), b = g.axis(j);
        for (double s : {-e, e})
          for (const auto& p : {on_shell_momentum(s, a, b, 2.0, 1.5), on_shell_momentum(a, s, b, 2.0, 1.5),
                                on_shell_momentum(a, b, s, 2.0, 1.5)})
            worst = std::max(worst, std::exp(-ex(p) / 0.3));
      }
    CHECK(worst <= 1e-10);
  }
  const MomentumGrid h(8, 1.0, 1.0, 1.0);
  CHECK(h.p0(h.index(7, 7, 7)) == doctest::Approx(std::sqrt(1.0 + 3.0 * std::pow(1.0 - 1.0 / 8.0, 2))));
}

TEST_CASE("isotropic distributions are at rest") {
  const MomentumGrid g(16, 3.0, 1.0, 1.0);
  std::vector<double> f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = std::exp(-g.momentum(k).spatial_norm());
  const MomentSet m = compute_moments(f, SpeciesParams::make("a", 1.0, 1.0), g, units);
  CHECK(m.U[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(m.U[i]) <= 1e-14);
  CHECK(m.n == doctest::Approx(m.number).epsilon(1e-14));
}

TEST_CASE("Eckart decomposition invariants for random fields") {
  std::mt19937_64 rng(5);
  for (double c : {1.0, 2.0}) {
    const MomentumGrid g(10, 2.5, 1.3, c);
    const SpeciesParams sp = SpeciesParams::make("a", 1.3, 0.7, 0.5);
    for (int t = 0; t < 20; ++t) {
      const std::vector<double> f = random_field(g, rng);
      const MomentSet m = compute_moments(f, sp, g, PhysicalConstants{c, 1.0, 1.0});
      CHECK(minkowski_dot(m.U, m.U) == doctest::Approx(c * c).epsilon(1e-12));
      for (std::size_t i = 0; i < 4; ++i) CHECK(m.N[i] == doctest::Approx(m.n * m.U[i]).epsilon(1e-12));
      CHECK(std::sqrt(m.N[0] * m.N[0] - m.N.spatial_norm2()) == doctest::Approx(m.n * c).epsilon(1e-12));
      CHECK(m.U[0] >= c);
      CHECK(m.number >= m.n);
      CHECK(m.N[0] == doctest::Approx(c * m.number).epsilon(1e-13));
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(m.T[a][b] == m.T[b][a]);
      CHECK(m.T[0][0] > 0.0);
      // c m rho < n: the Cauchy-Schwarz step behind the cold-input bound
      CHECK(c * 1.3 * m.rho < m.n);
    }
  }
}

TEST_CASE("vacuum and superluminal inputs are rejected") {
  const MomentumGrid g(6, 2.0, 1.0, 1.0);
  const SpeciesParams sp = SpeciesParams::make("a", 1.0, 1.0);
  std::vector<double> f(g.size(), 0.0);
  try {
    compute_moments(f, sp, g, units);
    FAIL("expected vacuum error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::vacuum_cell);
  }
  // Signed data can make the flux spacelike; the library must not return a NaN density.
  f[g.index(5, 2, 2)] = 1.0;
  f[g.index(0, 2, 2)] = -0.9;
  try {
    compute_moments(f, sp, g, units);
    FAIL("expected superluminal error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::superluminal_flux);
  }
}

TEST_CASE("discretised Juttner recovers its parameters") {
  const double kT = 0.25, c = 1.0, m = 1.0;
  const FourVector U0 = four_velocity_from_velocity(0.4, -0.2, 0.1, c);
  const SpeciesParams sp = SpeciesParams::make("a", m, 1.0);
  // continuum rho = n M_tilde / M
  const double rho0 = 2.0 / moment_ratio(m, 1.0 / kT, c);
  std::vector<MomentSet> ms;
  for (int n : {32, 64}) {
    const MomentumGrid g = MomentumGrid::for_juttner(n, m, c, kT, 0.5, 1e-12);
    ms.push_back(compute_moments(sample_juttner(g, 2.0, U0, kT, units), sp, g, units));
  }
  auto error = [&](const MomentSet& a) {
    double e = std::max(std::abs(a.n - 2.0) / 2.0, oracle::rel(a.rho, rho0));
    for (std::size_t i = 0; i < 4; ++i) e = std::max(e, std::abs(a.U[i] - U0[i]));
    return e;
  };
  double change = std::max(std::abs(ms[0].n - ms[1].n) / 2.0, oracle::rel(ms[0].rho, ms[1].rho));
  for (std::size_t i = 0; i < 4; ++i) change = std::max(change, std::abs(ms[0].U[i] - ms[1].U[i]));
  // the fine grid is an oracle for the coarse one
  CHECK(error(ms[0]) <= 1.1 * change);
  CHECK(error(ms[1]) <= 0.01 * error(ms[0]));
  CHECK(error(ms[1]) <= 1e-5);
}

TEST_CASE("cell-averaged moments converge at second order") {
  const double kT = 0.2;
  const FourVector U0 = four_velocity_from_velocity(0.3, 0.1, 0.0, 1.0);
  const SpeciesParams sp = SpeciesParams::make("a", 1.0, 1.0);
  const double rho_exact = 1.0 / moment_ratio(1.0, 1.0 / kT, 1.0);
  std::vector<double> err;
  for (int n : {24, 48, 96}) {
    const MomentumGrid g = MomentumGrid::for_juttner(n, 1.0, 1.0, kT, 0.35, 1e-14);
    const MomentSet ms = compute_moments(sample_juttner(g, 1.0, U0, kT, units, JuttnerSampling::cell_average), sp, g,
                                         units);
    err.push_back(oracle::rel(ms.rho, rho_exact));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("entropy of a Juttner at rest matches the closed form") {
  // f = (g/h^3) e^alpha exp(-c p0 / kT) gives S^0 = k c n (e/kT - alpha) with
  // e/kT = x K_1(x)/K_2(x) + 3, x = m c^2 / kT, and alpha fixed by n.
  const double kT = 0.5, m = 1.0, n = 1.7;
  const PhysicalConstants k2{1.0, 2.0, 0.8};
  SpeciesParams sp = SpeciesParams::make("a", m, 1.0, 0.5);
  const MomentumGrid g = MomentumGrid::for_juttner(96, m, 1.0, kT, 0.0, 1e-16);
  const std::vector<double> f = sample_juttner(g, n, {1, 0, 0, 0}, kT, k2);
  const double x = m / kT;
  const double M = 4.0 * std::numbers::pi * boost::math::cyl_bessel_k(2, x) / x;
  const double alpha = std::log(n * std::pow(k2.h, 3) / (sp.degeneracy * M));
  const double e_over_kT = x * boost::math::cyl_bessel_k(1, x) / boost::math::cyl_bessel_k(2, x) + 3.0;
  const double S0 = k2.k * k2.c * n * (e_over_kT - alpha);
  const FourVector S = species_entropy_flow(f, sp, g, k2);
  CHECK(oracle::rel(S[0], S0) <= 1e-8);
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(S[i]) <= 1e-13 * std::abs(S[0]));
}

TEST_CASE("entropy of zero is zero and mixing adds 2 k ln2 N") {
  const MomentumGrid g(8, 2.0, 1.0, 1.0);
  const SpeciesParams sp = SpeciesParams::make("a", 1.0, 1.0);
  std::vector<double> zero(g.size(), 0.0);
  const FourVector S0 = species_entropy_flow(zero, sp, g, units);
  for (std::size_t i = 0; i < 4; ++i) CHECK(S0[i] == 0.0);

  std::mt19937_64 rng(9);
  const std::vector<double> f = random_field(g, rng);
  std::vector<double> f2(f);
  for (double& v : f2) v *= 2.0;
  const std::vector<std::span<const double>> two{f, f};
  const std::vector<std::span<const double>> one{f2};
  const std::vector<SpeciesParams> sps{sp, sp};
  const std::vector<MomentumGrid> gs{g, g};
  const FourVector S_two = entropy_four_flow(two, sps, gs, units);
  const FourVector S_one = entropy_four_flow(one, std::span(sps).first(1), std::span(gs).first(1), units);
  const MomentSet m = compute_moments(f, sp, g, units);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(S_two[i] - S_one[i] == doctest::Approx(2.0 * std::log(2.0) * m.N[i]).epsilon(1e-12));
}

TEST_CASE("weighted flow sum") {
  std::mt19937_64 rng(21);
  const std::vector<SpeciesParams> sp{SpeciesParams::make("a", 1.0, 0.5), SpeciesParams::make("b", 3.0, 2.0)};
  const std::vector<MomentumGrid> gs{MomentumGrid(10, 3.0, 1.0, 1.0), MomentumGrid(10, 5.0, 3.0, 1.0)};
  SUBCASE("single species") {
    const MomentSet m = compute_moments(random_field(gs[0], rng), sp[0], gs[0], units);
    const WeightedFlow w = weighted_flow_sum(std::span(&m, 1), std::span(sp).first(1));
    CHECK(w.norm == doctest::Approx(2.0 * m.n).epsilon(1e-13));
  }
  SUBCASE("species at rest") {
    std::vector<MomentSet> ms;
    for (std::size_t i = 0; i < 2; ++i)
      ms.push_back(compute_moments(sample_juttner(gs[i], 0.5 + i, {1, 0, 0, 0}, 0.4, units), sp[i], gs[i], units));
    const WeightedFlow w = weighted_flow_sum(ms, sp);
    CHECK(w.norm == doctest::Approx(2.0 * ms[0].n + 1.5 * ms[1].n).epsilon(1e-13));
  }
  SUBCASE("drifting species: expanded norm and the Cauchy-Schwarz chain") {
    for (int t = 0; t < 10; ++t) {
      std::vector<MomentSet> ms;
      for (std::size_t i = 0; i < 2; ++i) ms.push_back(compute_moments(random_field(gs[i], rng), sp[i], gs[i], units));
      const WeightedFlow w = weighted_flow_sum(ms, sp);
      double expanded = 0.0, sum_n = 0.0, inf = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        const double ai = sp[i].mass / sp[i].tau;
        sum_n += ai * ms[i].n;
        inf += sp[i].mass * sp[i].mass * ms[i].rho / sp[i].tau;
        for (std::size_t j = i; j < 2; ++j) {
          const double aj = sp[j].mass / sp[j].tau;
          expanded += (i == j ? 1.0 : 2.0) * ai * aj * ms[i].n * ms[j].n * minkowski_dot(ms[i].U, ms[j].U);
        }
      }
      CHECK(w.norm * w.norm == doctest::Approx(expanded).epsilon(1e-12));
      CHECK(w.norm >= sum_n * (1.0 - 1e-14));
      CHECK(sum_n > inf);
    }
  }
}
