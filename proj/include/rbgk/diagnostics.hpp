#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbgk/dynamics.hpp"
#include "rbgk/phase_space.hpp"

namespace rbgk {

// ---------------------------------------------------------------- H-theorem

struct HMonitor {
  double value = 0.0;          // sum_i (c m_i/tau_i) int J (1 - f/J) ln(f/J) dp/p0
  double scale = 0.0;          // sum_i (c m_i/tau_i) int f dp/p0
  double scaled = 0.0;         // value / scale
  double max_integrand = 0.0;  // largest nodal J (1 - f/J) ln(f/J), never above 0
};

/// Discrete entropy-production functional of the relaxation operator. Nodes
/// with J = 0 contribute nothing; nodes with f = 0 < J use the smallest
/// normal double for f, which keeps the contribution finite and negative.
HMonitor h_theorem_monitor(std::span<const std::span<const double>> f,
                           std::span<const std::span<const double>> J,
                           std::span<const MomentumGrid> grids, std::span<const SpeciesParams> species,
                           const PhysicalConstants& consts);

// ------------------------------------------------------ temperature proxy

/// Per-species temperature kT_i from K_1/K_2(m c^2 / kT_i) = m c rho / n,
/// exact for a Juttner distribution and used as a proxy otherwise.
double temperature_proxy(const MomentSet& moments, const SpeciesParams& species,
                         const PhysicalConstants& consts);

// -------------------------------------------------------- classical limit

/// Uniform Cartesian velocity grid [-v_max, v_max]^3, midpoint nodes, the
/// same node order as MomentumGrid.
class VelocityGrid {
 public:
  VelocityGrid(int n_cells, double v_max);

  int n_cells() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  double v_max() const { return v_max_; }
  double dv() const { return dv_; }
  double cell_volume() const { return dv_ * dv_ * dv_; }
  double vx(std::size_t k) const { return axis_[k / (static_cast<std::size_t>(n_) * n_)]; }
  double vy(std::size_t k) const { return axis_[(k / n_) % n_]; }
  double vz(std::size_t k) const { return axis_[k % n_]; }

 private:
  int n_;
  double v_max_;
  double dv_;
  std::vector<double> axis_;
};

using Vec3 = std::array<double, 3>;

/// n (m / 2 pi T)^{3/2} exp(-m |v - u|^2 / 2T) at the nodes.
std::vector<double> sample_maxwellian(const VelocityGrid& grid, double n, const Vec3& u, double T,
                                      double mass);

struct ClassicalMoments {
  std::vector<double> n_nr;
  std::vector<Vec3> u_nr;
  std::vector<double> T_nr_i;
  Vec3 U_nr{};
  double T_nr = 0.0;
};

/// Classical per-species fields and the mixture velocity and temperature
/// weighted by nu_i m_i n_i and nu_i n_i. Throws vacuum_cell when a species
/// has no particles.
ClassicalMoments classical_moments(std::span<const std::span<const double>> f_bar,
                                   const VelocityGrid& grid, std::span<const double> masses,
                                   std::span<const double> nu);

/// One Maxwellian component of the classical initial data.
struct MaxwellianComponent {
  double n = 1.0;
  Vec3 u{};
  double T = 1.0;

  bool operator==(const MaxwellianComponent&) const = default;
};

struct ProbeSpecies {
  std::string name;
  double mass = 1.0;
  double nu = 1.0;  // s / tau
  double spin = 0.0;
  std::vector<MaxwellianComponent> components;  // f_bar is their sum

  bool operator==(const ProbeSpecies&) const = default;
};

struct NewtonianProbeConfig {
  std::vector<double> epsilons;  // strictly decreasing, at least three
  double c = 1.0;
  double s = 1.0;      // time scale; L = eps c s
  double n_bar = 1.0;  // typical number density
  int n_velocity = 48;
  double v_max = 7.0;
  BetaSolveOptions solver;
  std::vector<ProbeSpecies> species;

  void validate() const;
  bool operator==(const NewtonianProbeConfig&) const = default;
};

struct ProbeRow {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;  // set when the solve failed
  double beta_tilde = 0.0;
  double inv_beta = 0.0;            // 1 / bt
  double scaled_temperature = 0.0;  // 1 / (eps^2 c^2 bt)
  double temperature_defect = 0.0;  // |scaled_temperature - T_nr|
  double l1 = 0.0;                  // sum_i int |J_bar_i - M_i| dv
  double linf = 0.0;
  int iterations = 0;
};

struct ProbeResult {
  ClassicalMoments classical;
  std::vector<ProbeRow> rows;
  double slope_inv_beta = 0.0;
  double slope_temperature_defect = 0.0;
  double slope_l1 = 0.0;
  double fitted_C = 0.0;  // max over eps of inv_beta / eps^2
  bool l1_strictly_decreasing = false;
};

/// For each eps: p = eps c m v, f = (n_bar / (eps c m)^3) f_bar, tau = s / nu,
/// solve the mixture equilibrium, rescale the attractor back to velocity
/// variables and compare with the classical Maxwellian of the mixture.
/// A failed solve is recorded in its row and the sweep continues.
ProbeResult newtonian_limit_probe(const NewtonianProbeConfig& probe);

/// Least-squares slope of ln y against ln x over the finite positive pairs.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// ----------------------------------------------------- indifferentiability

struct IndifferentiabilityReport {
  std::vector<double> l1;           // after every step
  std::vector<double> relative_l1;  // l1 / int f_single dp dx
  double max_l1 = 0.0;
  double max_relative_l1 = 0.0;
  double max_U_difference = 0.0;  // |U_tilde(mixture) - U(total f)| / c over steps and cells
};

/// Runs the mixture and the single-species model of f = sum f_i side by
/// side. Requires equal masses, equal relaxation times and identical grids;
/// throws a config error otherwise.
IndifferentiabilityReport indifferentiability_check(const Model& mixture, const SimState& initial,
                                                    double dt, std::size_t steps);

// ------------------------------------------------------------ conservation

struct ConservationBudget {
  double mass_relative = 1e-12;
  double energy_momentum_relative = 1e-2;  // the frozen-attractor step is not conservative at O(dt^2)

  bool operator==(const ConservationBudget&) const = default;
};

struct LedgerSummary {
  std::size_t steps = 0;
  std::vector<double> mass_drift;           // absolute, per species
  std::vector<double> mass_drift_relative;  // per species
  FourVector energy_momentum_drift;         // absolute
  double energy_momentum_drift_relative = 0.0;  // max_mu |drift_mu| / P^0
  double max_step_energy_momentum_defect = 0.0;  // relative, worst step
  bool mass_ok = true;
  bool energy_momentum_ok = true;
};

LedgerSummary conservation_ledger(const Totals& initial, std::span<const StepReport> series,
                                  const ConservationBudget& budget = {});

/// Relative per-step energy-momentum defect max_mu |dP^mu| / P^0 of one
/// relaxation step from `state` for each dt in `dts`.
std::vector<double> energy_momentum_step_defects(const Model& model, const SimState& state,
                                                 std::span<const double> dts);

}  // namespace rbgk
