#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rbgk/equilibrium.hpp"
#include "rbgk/phase_space.hpp"
#include "rbgk/tensor.hpp"

namespace rbgk {

/// Static description of the mixture: species, their momentum grids and the
/// numerical settings shared by every step.
struct Model {
  std::vector<SpeciesParams> species;
  std::vector<MomentumGrid> grids;
  PhysicalConstants consts;
  BetaSolveOptions solver;
  double cfl_max = 1.0;
  int threads = 1;

  /// Throws unless species and grids match and every entry is valid.
  void validate() const;
};

/// 1D periodic spatial grid. A single cell means a space-homogeneous run.
struct SpatialGrid {
  std::size_t n_cells = 1;
  double dx = 1.0;
  bool periodic = true;
};

struct SimState {
  double time = 0.0;
  SpatialGrid space;
  DistributionField f;
  std::vector<EquilibriumState> equilibria;  // per cell, from the last relaxation
};

/// Allocates a zero field matching the model and the spatial grid.
SimState make_state(const Model& model, const SpatialGrid& space);

/// Conserved and monitored totals, integrated over momentum and space
/// (space-homogeneous runs use the cell width dx as volume).
struct Totals {
  std::vector<double> mass;  // per species, int f dp dx = N^0 / c
  FourVector energy_momentum;  // sum_i int p^mu f_i dp dx = T^{0 mu} / c
  double entropy = 0.0;        // int S^0 dx
};

Totals compute_totals(const Model& model, const SimState& state);

struct StepReport {
  double time = 0.0;  // at the end of the step
  double dt = 0.0;
  std::vector<double> mass_change;    // per species, absolute
  FourVector energy_momentum_change;  // absolute
  double entropy_change = 0.0;
  double entropy_production = 0.0;  // entropy_change / dt (flux divergence integrates to zero)
  double h_monitor = 0.0;           // worst scaled H-monitor over cells before relaxation
  int solver_iterations = 0;        // worst over cells
  double solver_residual = 0.0;     // worst over cells
  Totals totals;                    // after the step
};

/// Relaxation sub-step on every cell with the attractor frozen at the start:
///   f <- f + (1 - exp(-nu dt)) (J - f),  nu = c m / (tau p0).
/// The head factor of the frozen J is taken as
///   sum w f / sum w exp(-bt (U.p - m c^2)),  w = 1 - exp(-nu dt),
/// which keeps sum f dp exact per species and per cell and reduces to
/// rho / M_tilde as dt -> 0. Fills state.equilibria.
StepReport relax_step_0d(const Model& model, SimState& state, double dt);

/// Largest CFL number max |c p_x / p0| dt / dx over all species grids.
double cfl_number(const Model& model, const SpatialGrid& space, double dt);

/// First-order upwind transport along x with periodic boundaries. Throws
/// cfl_violation before touching the state if cfl_number > model.cfl_max.
void transport_step_1d(const Model& model, SimState& state, double dt);

/// Strang step: transport dt/2, relax dt, transport dt/2. Single-cell
/// states skip transport.
StepReport strang_step(const Model& model, SimState& state, double dt);

struct RunControl {
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t report_every = 1;  // observer cadence in steps; the last step is always reported
};

/// Advances the state and passes every reported step to `observer`. The
/// observer runs after the step is complete, so outputs it writes survive a
/// later failure.
void run_steps(const Model& model, SimState& state, const RunControl& control,
               const std::function<void(const SimState&, const StepReport&)>& observer);

}  // namespace rbgk
