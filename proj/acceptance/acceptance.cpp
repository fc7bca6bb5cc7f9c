// Acceptance criteria: one PASS/FAIL line each; the exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rbgk/config.hpp"
#include "rbgk/diagnostics.hpp"
#include "rbgk/dynamics.hpp"
#include "rbgk/equilibrium.hpp"
#include "rbgk/special_functions.hpp"

using namespace rbgk;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Model model_of(const fixture::Mixture& mix) {
  Model m;
  m.species = mix.species;
  m.grids = mix.grids;
  m.consts = mix.consts;
  return m;
}

SimState state_of(const Model& model, const fixture::Mixture& mix) {
  SimState s = make_state(model, {1, 1.0, true});
  for (std::size_t i = 0; i < mix.f.size(); ++i) std::copy(mix.f[i].begin(), mix.f[i].end(), s.f.cell(i, 0).begin());
  return s;
}

std::vector<double> rho_of(std::span<const MomentSet> ms) {
  std::vector<double> r;
  for (const auto& m : ms) r.push_back(m.rho);
  return r;
}

// 1. Well-posedness of the beta relation on random mixtures.
Verdict solver_well_posed() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_res = 0.0, worst_restart = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int ns = 2 + trial % 2;
    const double kT_min = 0.02;
    std::vector<fixture::SpeciesSpec> specs;
    for (int i = 0; i < ns; ++i) {
      const double m = std::exp(std::log(0.5) + u(rng) * std::log(16.0));  // within [0.5, 8]
      const double speed = 0.8 * u(rng), th = std::acos(2.0 * u(rng) - 1.0), ph = 2.0 * M_PI * u(rng);
      const double kT = kT_min * std::exp(u(rng) * std::log(10.0));
      specs.push_back({m, 0.2 + 2.0 * u(rng),
                       {{0.2 + 2.0 * u(rng), speed * std::sin(th) * std::cos(ph), speed * std::sin(th) * std::sin(ph),
                         speed * std::cos(th), kT}}});
    }
    const auto mix = fixture::make_mixture(specs, 16, 1e-8);
    const auto ms = mix.moments();
    const BetaSolveResult a = solve_beta_tilde(ms, mix.species, mix.consts);
    const double lhs = beta_relation_lhs(a.beta_tilde, rho_of(ms), mix.species, mix.consts);
    worst_res = std::max({worst_res, a.residual, std::abs(lhs - a.rhs) / a.rhs});
    BetaSolveOptions o;
    const double lo = a.bracket.first * (0.3 + 0.5 * u(rng)), hi = a.bracket.second * (1.2 + 3.0 * u(rng));
    o.bracket = std::pair{lo, hi};
    const BetaSolveResult b = solve_beta_tilde(ms, mix.species, mix.consts, o);
    worst_restart = std::max(worst_restart, std::abs(b.beta_tilde - a.beta_tilde) / a.beta_tilde);
  }
  return {worst_res <= 1e-10 && worst_restart <= 1e-10,
          fmt("50 fixtures, worst residual %.2e (<= 1e-10), worst restart difference %.2e (<= 1e-10)", worst_res,
              worst_restart)};
}

// 2. Constraint identities of the discrete attractor on 32^3 grids.
Verdict constraint_identities() {
  const auto mix = fixture::make_mixture({{1.0, 1.0, {{1.0, 0.2, 0.0, 0.0, 0.08}}},
                                          {4.0, 0.5, {{0.6, -0.1, 0.1, 0.0, 0.06}}},
                                          {2.0, 2.0, {{1.0, 0.0, 0.1, -0.1, 0.07}}}},
                                         32, 1e-10);
  const auto ms = mix.moments();
  const EquilibriumState eq = solve_equilibrium(ms, mix.species, mix.grids, mix.consts);
  const auto J = build_attractor(mix.views(), eq, mix.grids, mix.species, mix.consts);
  double mass = 0.0, mom = 0.0;
  FourVector lhs, rhs;
  for (std::size_t i = 0; i < J.size(); ++i) {
    const MomentSet mj = compute_moments(J[i], mix.species[i], mix.grids[i], mix.consts);
    mass = std::max(mass, std::abs(mj.rho - ms[i].rho) / ms[i].rho);
    const double w = mix.species[i].mass / mix.species[i].tau;
    lhs += w * mj.N;
    rhs += w * ms[i].N;
  }
  for (std::size_t mu = 0; mu < 4; ++mu) mom = std::max(mom, std::abs(lhs[mu] - rhs[mu]) / rhs[0]);
  return {mass <= 1e-14 && mom <= 1e-8,
          fmt("mass identity %.2e (<= 1e-14), momentum identity %.2e (<= 1e-8)", mass, mom)};
}

// 3. Juttner round trip converges at second order in the grid spacing.
Verdict juttner_round_trip() {
  const PhysicalConstants c;
  const SpeciesParams sp = SpeciesParams::make("a", 1.0, 1.0);
  const double kT = 0.2;
  const FourVector U = four_velocity_from_velocity(0.3, 0.1, 0.0, c.c);
  std::vector<double> eb, eu, h;
  for (int n : {16, 32, 64}) {
    const MomentumGrid g = MomentumGrid::for_juttner(n, 1.0, c.c, kT, 0.3, 1e-6);
    const auto f = sample_juttner(g, 1.0, U, kT, c, JuttnerSampling::cell_average);
    const std::vector<MomentSet> ms{compute_moments(f, sp, g, c)};
    const std::vector<SpeciesParams> sps{sp};
    const std::vector<MomentumGrid> gs{g};
    const EquilibriumState eq = solve_equilibrium(ms, sps, gs, c);
    eb.push_back(std::abs(eq.beta_tilde * kT - 1.0));
    eu.push_back((eq.U_tilde - U).spatial_norm() / c.c);
    h.push_back(g.dp());
  }
  const double sb = std::log2(eb[1] / eb[2]), su = std::log2(eu[1] / eu[2]);
  const double fb = loglog_slope(h, eb), fu = loglog_slope(h, eu);
  const bool ok = std::abs(sb - 2.0) <= 0.3 && std::abs(su - 2.0) <= 0.3 && std::abs(fb - 2.0) <= 0.3 &&
                  std::abs(fu - 2.0) <= 0.3;
  return {ok, fmt("beta errors %.2e %.2e %.2e, slope %.2f (fit %.2f); U errors %.2e %.2e %.2e, slope %.2f (fit %.2f); "
                  "band 2 +- 0.3",
                  eb[0], eb[1], eb[2], sb, fb, eu[0], eu[1], eu[2], su, fu)};
}

// Two-species 0D relaxation shared by criteria 4, 5 and 8: temperature
// ratio 3, opposite drifts 0.3c, run to 50 min(tau).
struct Relaxation {
  Model model;
  SimState initial;
  SimState final;
  Totals totals0;
  std::vector<StepReport> reports;
};

const Relaxation& relaxation() {
  static const Relaxation r = [] {
    Relaxation out;
    const double kT1 = 0.06, kT2 = 0.02;
    out.model.species = {SpeciesParams::make("a", 1.0, 1.0, 0.5), SpeciesParams::make("b", 2.0, 0.5, 0.5)};
    out.model.grids = {MomentumGrid::for_juttner(32, 1.0, 1.0, kT1, 0.3, 1e-12),
                       MomentumGrid::for_juttner(32, 2.0, 1.0, kT1, 0.3, 1e-12)};
    out.initial = make_state(out.model, {1, 1.0, true});
    const auto fa = sample_juttner(out.model.grids[0], 1.0, four_velocity_from_velocity(0.3, 0, 0, 1.0), kT1, out.model.consts);
    const auto fb = sample_juttner(out.model.grids[1], 1.0, four_velocity_from_velocity(-0.3, 0, 0, 1.0), kT2, out.model.consts);
    std::copy(fa.begin(), fa.end(), out.initial.f.cell(0, 0).begin());
    std::copy(fb.begin(), fb.end(), out.initial.f.cell(1, 0).begin());
    out.final = out.initial;
    out.totals0 = compute_totals(out.model, out.initial);
    const double t_end = 50.0 * 0.5, dt = 0.025;
    run_steps(out.model, out.final, {dt, static_cast<std::size_t>(std::lround(t_end / dt)), 1},
              [&](const SimState&, const StepReport& rep) { out.reports.push_back(rep); });
    return out;
  }();
  return r;
}

// 4. H-theorem monitor on every step of the 0D run and a 1D mixing run;
// 0D entropy nondecreasing per step.
Verdict h_theorem() {
  const Relaxation& r = relaxation();
  double h0 = -1e300, ds = 1e300;
  for (const StepReport& rep : r.reports) {
    h0 = std::max(h0, rep.h_monitor);
    double n = 0.0;
    for (double m : rep.totals.mass) n += m;
    ds = std::min(ds, rep.entropy_change / n);
  }
  const RunConfig cfg = parse_config_text(R"({
    "scenario": "mix-1d",
    "species": [
      {"name": "a", "mass": 1, "tau": 1,
       "initial": [{"density": 1, "velocity": [0.2, 0, 0], "temperature": 0.06}],
       "modulation": {"amplitude": 0.3, "mode": 1}},
      {"name": "b", "mass": 2, "tau": 0.5,
       "initial": [{"density": 0.8, "velocity": [-0.2, 0, 0], "temperature": 0.03}],
       "modulation": {"amplitude": 0.2, "mode": 2}}
    ],
    "momentum_grid": {"cells": 16, "tail_tol": 1e-10},
    "space": {"cells": 16, "dx": 0.5},
    "time": {"dt": 0.05, "steps": 100, "cfl_max": 0.9}
  })");
  const Model m1 = build_model(cfg, 1);
  SimState s1 = build_initial_state(cfg, m1);
  double h1 = -1e300;
  run_steps(m1, s1, {cfg.dt, cfg.steps, 1}, [&](const SimState&, const StepReport& rep) { h1 = std::max(h1, rep.h_monitor); });
  const bool ok = r.reports.size() >= 1000 && h0 <= 1e-13 && h1 <= 1e-13 && ds >= -1e-12;
  return {ok, fmt("0D: %zu steps, max monitor %.2e, min entropy change per particle %.2e (>= -1e-12); "
                  "1D: 100 steps, max monitor %.2e; bound 1e-13",
                  r.reports.size(), h0, ds, h1)};
}

// 5. Both species reach the common temperature and velocity.
Verdict equilibria() {
  const Relaxation& r = relaxation();
  double kT[2];
  FourVector U[2];
  for (std::size_t i = 0; i < 2; ++i) {
    const MomentSet m = compute_moments(r.final.f.cell(i, 0), r.model.species[i], r.model.grids[i], r.model.consts);
    kT[i] = temperature_proxy(m, r.model.species[i], r.model.consts);
    U[i] = m.U;
  }
  const double dT = std::abs(kT[0] - kT[1]) / r.final.equilibria[0].T_tilde;
  const double dU = (U[0] - U[1]).spatial_norm() / r.model.consts.c;
  return {dT <= 1e-6 && dU <= 1e-6,
          fmt("t = %.1f: |T1 - T2|/T~ = %.2e (<= 1e-6), |U1 - U2|/c = %.2e (<= 1e-6)", r.final.time, dT, dU)};
}

// 6. Three equal species against the single-species model.
Verdict indifferentiability() {
  const auto mix = fixture::make_mixture({{1.0, 1.0, {{1.0, 0.2, 0, 0, 0.08}}},
                                          {1.0, 1.0, {{0.5, -0.1, 0.1, 0, 0.04}}},
                                          {1.0, 1.0, {{0.8, 0, 0, 0.15, 0.06}}}},
                                         20, 1e-10);
  const Model model = model_of(mix);
  const IndifferentiabilityReport r = indifferentiability_check(model, state_of(model, mix), 0.05, 100);
  return {r.l1.size() == 100 && r.max_l1 <= 1e-10,
          fmt("100 steps, max L1 %.2e (<= 1e-10), relative %.2e", r.max_l1, r.max_relative_l1)};
}

// 7. Newtonian limit.
Verdict newtonian_limit() {
  NewtonianProbeConfig p;
  p.epsilons = {0.2, 0.1, 0.05, 0.025};
  p.n_velocity = 48;
  p.v_max = 7.0;
  p.species = {{"a", 1.0, 1.0, 0.5, {{1.0, {0.3, 0, 0}, 0.8}, {0.5, {-0.2, 0.1, 0}, 0.4}}},
               {"b", 2.0, 0.5, 0.5, {{0.7, {-0.25, 0, 0.1}, 0.6}}}};
  const ProbeResult r = newtonian_limit_probe(p);
  bool rows_ok = true;
  std::string l1s;
  for (const ProbeRow& row : r.rows) {
    rows_ok = rows_ok && row.ok;
    l1s += fmt(" %.2e", row.l1);
  }
  const bool ok = rows_ok && r.slope_inv_beta >= 1.7 && r.slope_inv_beta <= 2.3 && r.slope_temperature_defect >= 1.7 &&
                  r.slope_temperature_defect <= 2.3 && r.l1_strictly_decreasing;
  return {ok, fmt("slope 1/beta %.3f, slope temperature defect %.3f (band [1.7, 2.3]); L1%s %s", r.slope_inv_beta,
                  r.slope_temperature_defect, l1s.c_str(), r.l1_strictly_decreasing ? "decreasing" : "NOT decreasing")};
}

// 8. Conservation ledger.
Verdict conservation() {
  const Relaxation& r = relaxation();
  const LedgerSummary L = conservation_ledger(r.totals0, r.reports);
  double drift = 0.0;
  for (double d : L.mass_drift_relative) drift = std::max(drift, d);
  const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  const std::vector<double> d = energy_momentum_step_defects(r.model, r.initial, dts);
  bool ratios_ok = true;
  std::string ratios;
  for (std::size_t k = 1; k < d.size(); ++k) {
    const double q = d[k - 1] / d[k];
    ratios_ok = ratios_ok && std::abs(q - 4.0) <= 0.5;
    ratios += fmt(" %.3f", q);
  }
  return {L.steps >= 1000 && drift <= 1e-12 && ratios_ok,
          fmt("%zu steps, mass drift %.2e (<= 1e-12); step-defect ratios under dt halving%s (4 +- 0.5)", L.steps,
              drift, ratios.c_str())};
}

// 9. Special functions against quadrature of their defining integrals.
Verdict special_functions() {
  double kerr = 0.0, merr = 0.0;
  const int nb = 60;
  for (int k = 0; k <= nb; ++k) {
    const double x = 0.1 * std::pow(1e4, static_cast<double>(k) / nb);
    const ScaledBesselK s = scaled_bessel_k(x);
    kerr = std::max({kerr, oracle::rel(s.k1, oracle::scaled_k1(x)), oracle::rel(s.k2, oracle::scaled_k2(x))});
    for (double m : {0.5, 1.0, 4.0})
      for (double c : {1.0, 2.0}) {
        const double bt = x / (m * c * c);
        const EquilibriumIntegrals e = equilibrium_integrals(m, bt, c);
        const oracle::ScaledIntegrals o = oracle::scaled_equilibrium_integrals(m, bt, c);
        // scaled forms e^{x} M avoid underflow at large x; the error in the
        // logarithm is the relative error of the value
        merr = std::max({merr, std::abs(e.log_M + x - std::log(o.M)), std::abs(e.log_M_tilde + x - std::log(o.M_tilde))});
      }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lm(std::log(0.1), std::log(16.0)), lb(std::log(1e-3), std::log(1e4)),
      lc(std::log(0.5), std::log(3.0));
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double m = std::exp(lm(rng)), bt = std::exp(lb(rng)), c = std::exp(lc(rng));
    const double q = moment_ratio(m, bt, c);
    if (!(q > c * m && q <= c * m + 2.0 / (c * bt))) ++violations;
  }
  return {kerr <= 1e-8 && merr <= 1e-8 && violations == 0,
          fmt("K1, K2 worst %.2e; M, M~ worst %.2e (<= 1e-8 over beta_m in [0.1, 1e3]); sandwich violations %d / 1000",
              kerr, merr, violations)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 beta relation well-posed", solver_well_posed},
      {"2 attractor constraint identities", constraint_identities},
      {"3 Juttner round trip O(dp^2)", juttner_round_trip},
      {"4 H-theorem", h_theorem},
      {"5 equilibria", equilibria},
      {"6 indifferentiability", indifferentiability},
      {"7 Newtonian limit", newtonian_limit},
      {"8 conservation ledger", conservation},
      {"9 special functions", special_functions},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-36s %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
