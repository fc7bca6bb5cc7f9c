#include "rbgk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rbgk/diagnostics.hpp"
#include "rbgk/error.hpp"
#include "rbgk/parallel.hpp"
#include "rbgk/summation.hpp"

namespace rbgk {

void Model::validate() const {
  if (species.empty()) fail(ErrorCategory::config, "model has no species");
  if (grids.size() != species.size())
    fail(ErrorCategory::internal, "model needs one momentum grid per species");
  consts.validate();
  for (std::size_t i = 0; i < species.size(); ++i) {
    species[i].validate();
    if (grids[i].mass() != species[i].mass || grids[i].c() != consts.c)
      fail(ErrorCategory::internal, "grid of species '" + species[i].name + "' built for another mass or c");
  }
  if (!(solver.tol > 0.0)) fail(ErrorCategory::config, "solver tolerance must be positive");
  if (!(cfl_max > 0.0)) fail(ErrorCategory::config, "cfl_max must be positive");
}

SimState make_state(const Model& model, const SpatialGrid& space) {
  if (space.n_cells < 1) fail(ErrorCategory::config, "spatial grid needs at least one cell");
  if (!(space.dx > 0.0)) fail(ErrorCategory::config, "dx must be positive");
  if (!space.periodic) fail(ErrorCategory::config, "only periodic boundaries are implemented");
  std::vector<std::size_t> nodes;
  for (const auto& g : model.grids) nodes.push_back(g.size());
  SimState s;
  s.space = space;
  s.f = DistributionField(std::move(nodes), space.n_cells);
  s.equilibria.resize(space.n_cells);
  return s;
}

Totals compute_totals(const Model& model, const SimState& state) {
  const std::size_t ns = model.species.size();
  Totals t;
  t.mass.assign(ns, 0.0);
  std::vector<CompensatedSum> mass(ns);
  std::array<CompensatedSum, 4> em;
  CompensatedSum entropy;
  const double dx = state.space.dx;
  for (std::size_t x = 0; x < state.space.n_cells; ++x) {
    for (std::size_t i = 0; i < ns; ++i) {
      const auto f = state.f.cell(i, x);
      const MomentumGrid& g = model.grids[i];
      CompensatedSum m;
      std::array<CompensatedSum, 4> p;
      for (std::size_t k = 0; k < f.size(); ++k) {
        m += f[k];
        p[0] += g.p0(k) * f[k];
        p[1] += g.px(k) * f[k];
        p[2] += g.py(k) * f[k];
        p[3] += g.pz(k) * f[k];
      }
      const double w = g.cell_volume() * dx;
      mass[i] += m.value() * w;
      for (std::size_t mu = 0; mu < 4; ++mu) em[mu] += p[mu].value() * w;
      entropy += species_entropy_flow(f, model.species[i], g, model.consts)[0] * dx;
    }
  }
  for (std::size_t i = 0; i < ns; ++i) t.mass[i] = mass[i].value();
  for (std::size_t mu = 0; mu < 4; ++mu) t.energy_momentum[mu] = em[mu].value();
  t.entropy = entropy.value();
  return t;
}

namespace {

struct CellOutcome {
  int iterations = 0;
  double residual = 0.0;
  double h_monitor = 0.0;
};

CellOutcome relax_cell(const Model& model, SimState& state, std::size_t x, double dt) {
  const std::size_t ns = model.species.size();
  const PhysicalConstants& consts = model.consts;
  std::vector<MomentSet> moments(ns);
  std::vector<std::span<const double>> fspans(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    fspans[i] = state.f.cell(i, x);
    moments[i] = compute_moments(fspans[i], model.species[i], model.grids[i], consts);
  }
  const EquilibriumState eq =
      solve_equilibrium(moments, model.species, model.grids, consts, model.solver);

  std::vector<std::vector<double>> J(ns);
  std::vector<std::vector<double>> E(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    E[i] = juttner_exponentials(model.grids[i], eq.beta_tilde, eq.U_tilde, consts);
    J[i] = E[i];
    for (double& v : J[i]) v *= eq.head[i];
  }
  std::vector<std::span<const double>> jspans(J.begin(), J.end());
  CellOutcome out;
  out.h_monitor = h_theorem_monitor(fspans, jspans, model.grids, model.species, consts).scaled;
  out.iterations = eq.iterations;
  out.residual = eq.residual;

  for (std::size_t i = 0; i < ns; ++i) {
    const MomentumGrid& g = model.grids[i];
    const double rate = consts.c * model.species[i].mass / model.species[i].tau;
    const std::span<double> f = state.f.cell(i, x);
    std::vector<double> w(f.size());
    CompensatedSum wf, we;
    for (std::size_t k = 0; k < f.size(); ++k) {
      w[k] = -std::expm1(-rate * dt / g.p0(k));
      wf += w[k] * f[k];
      we += w[k] * E[i][k];
    }
    const double head = wf.value() / we.value();
    for (std::size_t k = 0; k < f.size(); ++k) f[k] += w[k] * (head * E[i][k] - f[k]);
  }
  state.equilibria[x] = eq;
  return out;
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCategory::domain, "time step must be positive and finite");
}

}  // namespace

StepReport relax_step_0d(const Model& model, SimState& state, double dt) {
  check_dt(dt);
  const Totals before = compute_totals(model, state);
  const std::size_t nx = state.space.n_cells;
  std::vector<CellOutcome> outcomes(nx);
  parallel_for(nx, model.threads, [&](std::size_t x) { outcomes[x] = relax_cell(model, state, x, dt); });
  state.time += dt;

  StepReport r;
  r.time = state.time;
  r.dt = dt;
  for (const auto& o : outcomes) {
    r.solver_iterations = std::max(r.solver_iterations, o.iterations);
    r.solver_residual = std::max(r.solver_residual, o.residual);
  }
  // All monitor values are <= 0; report the largest (least negative).
  if (nx > 0) {
    r.h_monitor = outcomes[0].h_monitor;
    for (const auto& o : outcomes) r.h_monitor = std::max(r.h_monitor, o.h_monitor);
  }
  r.totals = compute_totals(model, state);
  r.mass_change.resize(before.mass.size());
  for (std::size_t i = 0; i < before.mass.size(); ++i)
    r.mass_change[i] = r.totals.mass[i] - before.mass[i];
  r.energy_momentum_change = r.totals.energy_momentum - before.energy_momentum;
  r.entropy_change = r.totals.entropy - before.entropy;
  r.entropy_production = r.entropy_change / dt;
  return r;
}

double cfl_number(const Model& model, const SpatialGrid& space, double dt) {
  double vmax = 0.0;
  for (const auto& g : model.grids)
    for (int i = 0; i < g.n_cells(); ++i) {
      // |p_x| / p0 is largest at the smallest transverse momentum.
      const double px = g.axis(i);
      const double pt = g.axis(g.n_cells() / 2);
      const double p0 = std::sqrt(g.mass() * g.c() * g.mass() * g.c() + px * px + 2.0 * pt * pt);
      vmax = std::max(vmax, g.c() * std::abs(px) / p0);
    }
  return vmax * dt / space.dx;
}

void transport_step_1d(const Model& model, SimState& state, double dt) {
  check_dt(dt);
  const std::size_t nx = state.space.n_cells;
  if (nx < 2) return;
  const double cfl = cfl_number(model, state.space, dt);
  if (cfl > model.cfl_max) {
    std::ostringstream os;
    os << "CFL number " << cfl << " exceeds the bound " << model.cfl_max << " (dt = " << dt
       << ", dx = " << state.space.dx << ")";
    fail(ErrorCategory::cfl_violation, os.str());
  }
  const double lambda = dt / state.space.dx;
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    const MomentumGrid& g = model.grids[i];
    const std::vector<double> old = state.f.species_values(i);
    std::vector<double>& cur = state.f.species_values(i);
    const std::size_t nk = g.size();
    parallel_for(nx, model.threads, [&](std::size_t x) {
      const std::size_t left = (x + nx - 1) % nx;
      const std::size_t right = (x + 1) % nx;
      for (std::size_t k = 0; k < nk; ++k) {
        const double v = g.velocity_x(k);
        const double here = old[x * nk + k];
        // Upwind flux difference.
        const double d = v > 0.0 ? v * (here - old[left * nk + k]) : v * (old[right * nk + k] - here);
        cur[x * nk + k] = here - lambda * d;
      }
    });
  }
}

StepReport strang_step(const Model& model, SimState& state, double dt) {
  check_dt(dt);
  if (state.space.n_cells < 2) return relax_step_0d(model, state, dt);
  const Totals before = compute_totals(model, state);
  // Check the CFL bound for the half step before any sub-step mutates the state.
  const double cfl = cfl_number(model, state.space, 0.5 * dt);
  if (cfl > model.cfl_max) {
    std::ostringstream os;
    os << "CFL number " << cfl << " exceeds the bound " << model.cfl_max;
    fail(ErrorCategory::cfl_violation, os.str());
  }
  transport_step_1d(model, state, 0.5 * dt);
  StepReport r = relax_step_0d(model, state, dt);
  transport_step_1d(model, state, 0.5 * dt);
  r.totals = compute_totals(model, state);
  for (std::size_t i = 0; i < before.mass.size(); ++i)
    r.mass_change[i] = r.totals.mass[i] - before.mass[i];
  r.energy_momentum_change = r.totals.energy_momentum - before.energy_momentum;
  r.entropy_change = r.totals.entropy - before.entropy;
  r.entropy_production = r.entropy_change / dt;
  return r;
}

void run_steps(const Model& model, SimState& state, const RunControl& control,
               const std::function<void(const SimState&, const StepReport&)>& observer) {
  check_dt(control.dt);
  const std::size_t every = std::max<std::size_t>(control.report_every, 1);
  for (std::size_t n = 1; n <= control.steps; ++n) {
    const StepReport r = strang_step(model, state, control.dt);
    if (observer && (n % every == 0 || n == control.steps)) observer(state, r);
  }
}

}  // namespace rbgk
