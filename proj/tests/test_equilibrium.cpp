#include <cmath>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rbgk/equilibrium.hpp"
#include "rbgk/error.hpp"
#include "rbgk/special_functions.hpp"

using namespace rbgk;
using fixture::make_mixture;

namespace {

// Light species need finer grids than these: the tests stay at 32 nodes per
// axis and keep every thermal width resolved.
fixture::Mixture two_species() {
  return make_mixture({{1.0, 1.0, {{1.0, 0.3, 0.0, 0.0, 0.08}}}, {3.0, 0.5, {{0.6, -0.2, 0.1, 0.0, 0.04}}}}, 32, 1e-10);
}

fixture::Mixture three_species() {
  return make_mixture({{1.0, 1.0, {{1.0, 0.2, 0.0, 0.0, 0.08}, {0.3, -0.1, 0.0, 0.1, 0.06}}},
                       {4.0, 0.5, {{0.6, -0.1, 0.1, 0.0, 0.06}}},
                       {2.0, 2.0, {{1.0, 0.0, 0.1, -0.1, 0.07}}}},
                      32, 1e-10);
}

}  // namespace

TEST_CASE("beta relation left side") {
  const std::vector<SpeciesParams> one{SpeciesParams::make("a", 1.0, 1.0)};
  const std::vector<double> rho{1.0};
  const PhysicalConstants units{};
  CHECK(oracle::rel(beta_relation_lhs(1.0, rho, one, units),
                    boost::math::cyl_bessel_k(2, 1.0) / boost::math::cyl_bessel_k(1, 1.0)) <= 1e-12);

  const std::vector<SpeciesParams> sp{SpeciesParams::make("a", 1.0, 1.0), SpeciesParams::make("b", 3.0, 0.5)};
  const std::vector<double> r2{0.7, 1.9};
  const PhysicalConstants c2{2.0, 1.0, 1.0};
  CHECK(beta_relation_lhs(1.0, r2, sp, c2) > beta_relation_lhs(2.0, r2, sp, c2));
  const double inf = 2.0 * (1.0 * 0.7 / 1.0 + 9.0 * 1.9 / 0.5);
  const double cold = beta_relation_lhs(1e8, r2, sp, c2);
  CHECK(cold > inf);
  CHECK(oracle::rel(cold, inf) <= 1e-7);
  // slope against a central difference
  for (double bt : {0.05, 1.0, 30.0}) {
    const double h = 1e-5 * bt;
    const double fd = (beta_relation_lhs(bt + h, r2, sp, c2) - beta_relation_lhs(bt - h, r2, sp, c2)) / (2.0 * h);
    CHECK(oracle::rel(beta_relation_lhs_slope(bt, r2, sp, c2), fd) <= 1e-6);
  }
}

TEST_CASE("Juttner input returns its own temperature") {
  const double kT0 = 0.08;
  SUBCASE("single species at rest") {
    double prev = 1.0;
    for (int n : {24, 48}) {
      const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0, 0, 0, kT0}}}}, n);
      const BetaSolveResult r = solve_beta_tilde(mix.moments(), mix.species, mix.consts);
      CHECK(r.residual <= 1e-12);
      const double err = oracle::rel(r.beta_tilde, 1.0 / kT0);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev <= 1e-9);
  }
  SUBCASE("two equal species at rest") {
    const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0, 0, 0, kT0}}}, {1.0, 1.0, {{2.5, 0, 0, 0, kT0}}}}, 48);
    const BetaSolveResult r = solve_beta_tilde(mix.moments(), mix.species, mix.consts);
    CHECK(oracle::rel(r.beta_tilde, 1.0 / kT0) <= 1e-9);
  }
}

TEST_CASE("solver residual and bracket independence") {
  for (const auto& mix : {two_species(), three_species()}) {
    const auto ms = mix.moments();
    const BetaSolveResult a = solve_beta_tilde(ms, mix.species, mix.consts);
    CHECK(a.residual <= 1e-10);
    const double lhs = beta_relation_lhs(a.beta_tilde, std::vector<double>{[&] {
                                           std::vector<double> r;
                                           for (const auto& m : ms) r.push_back(m.rho);
                                           return r;
                                         }()},
                                         mix.species, mix.consts);
    CHECK(std::abs(lhs - a.rhs) <= 1e-10 * a.rhs);
    for (const auto& br : {std::pair{1e-3, 1e-2}, std::pair{1e3, 1e4}, std::pair{0.5 * a.beta_tilde, 0.6 * a.beta_tilde}}) {
      BetaSolveOptions o;
      o.bracket = br;
      const BetaSolveResult b = solve_beta_tilde(ms, mix.species, mix.consts, o);
      CHECK(std::abs(b.beta_tilde - a.beta_tilde) <= 1e-12 * a.beta_tilde);
    }
  }
}

TEST_CASE("solver history is recorded on request") {
  const auto mix = two_species();
  BetaSolveOptions o;
  o.record_history = true;
  const BetaSolveResult r = solve_beta_tilde(mix.moments(), mix.species, mix.consts, o);
  CHECK(!r.history.empty());
  CHECK(r.iterations == static_cast<int>(r.history.size()));
}

TEST_CASE("cold input is reported") {
  const MomentumGrid g(8, 2.0, 1.0, 1.0);
  std::vector<double> f(g.size(), 0.0);
  f[g.index(5, 3, 4)] = 1.0;
  const std::vector<SpeciesParams> sp{SpeciesParams::make("a", 1.0, 1.0)};
  const std::vector<MomentSet> ms{compute_moments(f, sp[0], g, {})};
  try {
    solve_beta_tilde(ms, sp, {});
    FAIL("expected cold input");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::cold_input);
  }
}

TEST_CASE("mixture four-velocity") {
  SUBCASE("common rest") {
    const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0, 0, 0, 0.1}}}, {2.0, 0.3, {{0.4, 0, 0, 0, 0.05}}}}, 16);
    const FourVector U = compute_U_tilde(mix.moments(), mix.species, mix.consts);
    CHECK(U[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(U[i]) <= 1e-14);
  }
  SUBCASE("single species") {
    const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0.4, -0.3, 0.2, 0.1}}}}, 16);
    const auto ms = mix.moments();
    const FourVector U = compute_U_tilde(ms, mix.species, mix.consts);
    for (std::size_t i = 0; i < 4; ++i) CHECK(U[i] == doctest::Approx(ms[0].U[i]).epsilon(1e-13));
  }
  SUBCASE("opposite drifts cancel") {
    // Mirror images of each other on a symmetric grid.
    const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0.3, 0, 0, 0.1}}}, {1.0, 1.0, {{1.0, -0.3, 0, 0, 0.1}}}}, 16);
    const FourVector U = compute_U_tilde(mix.moments(), mix.species, mix.consts);
    CHECK(U[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(U[i]) <= 1e-14);
  }
  SUBCASE("normalisation") {
    const auto mix = three_species();
    const FourVector U = compute_U_tilde(mix.moments(), mix.species, mix.consts);
    CHECK(minkowski_dot(U, U) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("attractor constraint identities") {
  const auto mix = three_species();
  const auto ms = mix.moments();
  const EquilibriumState eq = solve_equilibrium(ms, mix.species, mix.grids, mix.consts);
  const auto J = build_attractor(mix.views(), eq, mix.grids, mix.species, mix.consts);
  FourVector lhs, rhs;
  for (std::size_t i = 0; i < J.size(); ++i) {
    const MomentSet mj = compute_moments(J[i], mix.species[i], mix.grids[i], mix.consts);
    CHECK(oracle::rel(mj.rho, ms[i].rho) <= 1e-14);
    for (double v : J[i]) CHECK(v > 0.0);
    const double a = mix.species[i].mass / mix.species[i].tau;
    lhs += a * (mj.N / mix.consts.c);
    rhs += a * (ms[i].N / mix.consts.c);
  }
  for (std::size_t mu = 0; mu < 4; ++mu) CHECK(std::abs(lhs[mu] - rhs[mu]) <= 1e-8 * rhs[0]);
  CHECK(minkowski_dot(eq.U_tilde, eq.U_tilde) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eq.residual <= 1e-12);
  CHECK(eq.T_tilde == doctest::Approx(1.0 / eq.beta_tilde));
}

TEST_CASE("Juttner input is a fixed point of the attractor") {
  const auto mix = make_mixture({{1.0, 1.0, {{1.0, 0.2, 0.1, 0, 0.08}}}, {3.0, 0.5, {{0.6, 0.2, 0.1, 0, 0.08}}}}, 48);
  const EquilibriumState eq = solve_equilibrium(mix.moments(), mix.species, mix.grids, mix.consts);
  const auto J = build_attractor(mix.views(), eq, mix.grids, mix.species, mix.consts);
  for (std::size_t i = 0; i < J.size(); ++i) {
    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < J[i].size(); ++k) {
      diff += std::abs(J[i][k] - mix.f[i][k]);
      norm += mix.f[i][k];
    }
    CHECK(diff / norm <= 1e-8);
  }
}

TEST_CASE("frame consistency of the discrete normalisation") {
  const auto mix = three_species();
  const EquilibriumState eq = solve_equilibrium(mix.moments(), mix.species, mix.grids, mix.consts);
  for (std::size_t i = 0; i < mix.grids.size(); ++i) {
    const auto e = juttner_exponentials(mix.grids[i], eq.beta_tilde, eq.U_tilde, mix.consts);
    const double discrete = discrete_scaled_M_tilde(e, mix.grids[i]);
    const double x = mix.species[i].mass * eq.beta_tilde;
    const EquilibriumIntegrals ei = equilibrium_integrals(mix.species[i].mass, eq.beta_tilde, 1.0);
    CHECK(oracle::rel(discrete, std::exp(ei.log_M_tilde + x)) <= 1e-8);
  }
}

TEST_CASE("scaling covariance") {
  const auto mix = three_species();
  auto scaled = mix;
  const double lambda = 3.7;
  for (auto& f : scaled.f)
    for (double& v : f) v *= lambda;
  const EquilibriumState a = solve_equilibrium(mix.moments(), mix.species, mix.grids, mix.consts);
  const EquilibriumState b = solve_equilibrium(scaled.moments(), scaled.species, scaled.grids, scaled.consts);
  CHECK(b.beta_tilde == doctest::Approx(a.beta_tilde).epsilon(1e-12));
  for (std::size_t mu = 0; mu < 4; ++mu) CHECK(std::abs(b.U_tilde[mu] - a.U_tilde[mu]) <= 1e-13);
  for (std::size_t i = 0; i < a.head.size(); ++i) CHECK(b.head[i] == doctest::Approx(lambda * a.head[i]).epsilon(1e-12));
}

TEST_CASE("indifferentiable species: attractors sum to the single-species one") {
  // Equal masses give identical grids, so sums are taken node by node.
  const auto parts = make_mixture({{1.0, 1.0, {{1.0, 0.2, 0, 0, 0.08}}},
                                   {1.0, 1.0, {{0.5, -0.1, 0.1, 0, 0.04}}},
                                   {1.0, 1.0, {{0.8, 0, 0, 0.15, 0.06}}}},
                                  32);
  const MomentumGrid& g = parts.grids[0];
  std::vector<double> total(g.size(), 0.0);
  for (const auto& f : parts.f)
    for (std::size_t k = 0; k < g.size(); ++k) total[k] += f[k];
  const std::vector<SpeciesParams> one{parts.species[0]};
  const std::vector<MomentumGrid> one_grid{g};
  const std::vector<MomentSet> m_one{compute_moments(total, one[0], g, parts.consts)};
  const EquilibriumState e_one = solve_equilibrium(m_one, one, one_grid, parts.consts);
  const EquilibriumState e_mix = solve_equilibrium(parts.moments(), parts.species, parts.grids, parts.consts);
  CHECK(e_mix.beta_tilde == doctest::Approx(e_one.beta_tilde).epsilon(1e-12));
  for (std::size_t mu = 0; mu < 4; ++mu) CHECK(std::abs(e_mix.U_tilde[mu] - m_one[0].U[mu]) <= 1e-12);
  const auto J_mix = build_attractor(parts.views(), e_mix, parts.grids, parts.species, parts.consts);
  const std::vector<std::span<const double>> tv{total};
  const auto J_one = build_attractor(tv, e_one, one_grid, one, parts.consts);
  double diff = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    diff += std::abs(J_mix[0][k] + J_mix[1][k] + J_mix[2][k] - J_one[0][k]);
    norm += J_one[0][k];
  }
  CHECK(diff / norm <= 1e-12);
}

TEST_CASE("chemical potentials") {
  SUBCASE("unit head gives zero") {
    EquilibriumState eq;
    eq.beta_tilde = 2.0;
    eq.log_head = {0.0};
    const std::vector<SpeciesParams> sp{SpeciesParams::make("a", 1.0, 1.0, 0.0)};
    CHECK(recover_chemical_potentials(eq, sp, {})[0] == 0.0);
  }
  const auto mix = three_species();
  const EquilibriumState eq = solve_equilibrium(mix.moments(), mix.species, mix.grids, mix.consts);
  SUBCASE("doubling f shifts mu by ln2 / beta") {
    auto doubled = mix;
    for (double& v : doubled.f[1]) v *= 2.0;
    // At fixed beta and U the head of species 1 doubles with its rho.
    const auto J = build_attractor(doubled.views(), eq, doubled.grids, doubled.species, doubled.consts);
    const MomentSet m1 = compute_moments(J[1], doubled.species[1], doubled.grids[1], doubled.consts);
    CHECK(m1.rho == doctest::Approx(2.0 * mix.moments()[1].rho).epsilon(1e-13));
    EquilibriumState fixed = eq;
    fixed.log_head[1] += std::log(2.0);
    const auto mu0 = recover_chemical_potentials(eq, mix.species, mix.consts);
    const auto mu1 = recover_chemical_potentials(fixed, mix.species, mix.consts);
    CHECK(mu1[1] - mu0[1] == doctest::Approx(std::log(2.0) / eq.beta_tilde).epsilon(1e-12));
    CHECK(mu1[0] == mu0[0]);
  }
  SUBCASE("round trip through the chemical potential") {
    const auto J = build_attractor(mix.views(), eq, mix.grids, mix.species, mix.consts);
    for (std::size_t i = 0; i < J.size(); ++i) {
      const auto R = juttner_from_chemical_potential(mix.grids[i], eq.mu_tilde[i], eq.beta_tilde, eq.U_tilde,
                                                     mix.species[i], mix.consts);
      double worst = 0.0, peak = 0.0;
      for (std::size_t k = 0; k < R.size(); ++k) {
        worst = std::max(worst, std::abs(R[k] - J[i][k]));
        peak = std::max(peak, J[i][k]);
      }
      CHECK(worst <= 1e-12 * peak);
    }
  }
}
