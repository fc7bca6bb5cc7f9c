#include "rbgk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rbgk/equilibrium.hpp"
#include "rbgk/error.hpp"
#include "rbgk/special_functions.hpp"
#include "rbgk/summation.hpp"

namespace rbgk {

HMonitor h_theorem_monitor(std::span<const std::span<const double>> f,
                           std::span<const std::span<const double>> J,
                           std::span<const MomentumGrid> grids, std::span<const SpeciesParams> species,
                           const PhysicalConstants& consts) {
  if (f.size() != J.size() || f.size() != grids.size() || f.size() != species.size())
    fail(ErrorCategory::internal, "h_theorem_monitor: species count mismatch");
  constexpr double tiny = std::numeric_limits<double>::min();
  HMonitor h;
  CompensatedSum value, scale;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MomentumGrid& g = grids[i];
    const double rate = consts.c * species[i].mass / species[i].tau;
    CompensatedSum vi, si;
    for (std::size_t k = 0; k < f[i].size(); ++k) {
      const double inv = 1.0 / g.p0(k);
      si += f[i][k] * inv;
      const double j = J[i][k];
      if (j <= 0.0) continue;
      const double fk = std::max(f[i][k], tiny);
      // J (1 - x) ln x with x = f/J, written to avoid forming x.
      const double term = (j - fk) * (std::log(fk) - std::log(j));
      h.max_integrand = std::max(h.max_integrand, term);
      vi += term * inv;
    }
    value += rate * vi.value() * g.cell_volume();
    scale += rate * si.value() * g.cell_volume();
  }
  h.value = value.value();
  h.scale = scale.value();
  h.scaled = h.scale > 0.0 ? h.value / h.scale : 0.0;
  return h;
}

double temperature_proxy(const MomentSet& moments, const SpeciesParams& species,
                         const PhysicalConstants& consts) {
  const double ratio = species.mass * consts.c * moments.rho / moments.n;
  const double beta = invert_bessel_ratio_k1_k2(ratio);
  return species.mass * consts.c * consts.c / beta;
}

VelocityGrid::VelocityGrid(int n_cells, double v_max)
    : n_(n_cells), v_max_(v_max), dv_(2.0 * v_max / n_cells) {
  if (n_cells < 1) fail(ErrorCategory::domain, "velocity grid needs at least one cell per axis");
  if (!(v_max > 0.0)) fail(ErrorCategory::domain, "velocity grid extent must be positive");
  axis_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) axis_[static_cast<std::size_t>(i)] = -v_max_ + (i + 0.5) * dv_;
}

std::vector<double> sample_maxwellian(const VelocityGrid& grid, double n, const Vec3& u, double T,
                                      double mass) {
  if (!(T > 0.0) || !(mass > 0.0) || !(n >= 0.0))
    fail(ErrorCategory::domain, "Maxwellian needs n >= 0, T > 0 and m > 0");
  const double a = mass / (2.0 * T);
  const double prefactor = n * std::pow(a / std::numbers::pi, 1.5);
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double dx = grid.vx(k) - u[0], dy = grid.vy(k) - u[1], dz = grid.vz(k) - u[2];
    out[k] = prefactor * std::exp(-a * (dx * dx + dy * dy + dz * dz));
  }
  return out;
}

ClassicalMoments classical_moments(std::span<const std::span<const double>> f_bar,
                                   const VelocityGrid& grid, std::span<const double> masses,
                                   std::span<const double> nu) {
  const std::size_t ns = f_bar.size();
  if (ns == 0 || masses.size() != ns || nu.size() != ns)
    fail(ErrorCategory::internal, "classical_moments: species count mismatch");
  ClassicalMoments cm;
  cm.n_nr.resize(ns);
  cm.u_nr.resize(ns);
  cm.T_nr_i.resize(ns);
  const double w = grid.cell_volume();
  for (std::size_t i = 0; i < ns; ++i) {
    CompensatedSum n;
    std::array<CompensatedSum, 3> flux;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      n += f_bar[i][k];
      flux[0] += grid.vx(k) * f_bar[i][k];
      flux[1] += grid.vy(k) * f_bar[i][k];
      flux[2] += grid.vz(k) * f_bar[i][k];
    }
    const double ni = n.value() * w;
    if (!(ni >= 1e-300)) fail(ErrorCategory::vacuum_cell, "classical species has no particles");
    cm.n_nr[i] = ni;
    for (std::size_t d = 0; d < 3; ++d) cm.u_nr[i][d] = flux[d].value() * w / ni;
    CompensatedSum spread;
    const Vec3& u = cm.u_nr[i];
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double dx = grid.vx(k) - u[0], dy = grid.vy(k) - u[1], dz = grid.vz(k) - u[2];
      spread += (dx * dx + dy * dy + dz * dz) * f_bar[i][k];
    }
    cm.T_nr_i[i] = masses[i] * spread.value() * w / (3.0 * ni);
  }
  double weight = 0.0;
  Vec3 U{};
  for (std::size_t i = 0; i < ns; ++i) {
    const double a = nu[i] * masses[i] * cm.n_nr[i];
    weight += a;
    for (std::size_t d = 0; d < 3; ++d) U[d] += a * cm.u_nr[i][d];
  }
  for (double& x : U) x /= weight;
  cm.U_nr = U;
  const double U2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    const Vec3& u = cm.u_nr[i];
    const double u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    num += nu[i] * (0.5 * masses[i] * cm.n_nr[i] * (u2 - U2) + 1.5 * cm.n_nr[i] * cm.T_nr_i[i]);
    den += 1.5 * nu[i] * cm.n_nr[i];
  }
  cm.T_nr = num / den;
  return cm;
}

void NewtonianProbeConfig::validate() const {
  std::ostringstream os;
  if (epsilons.size() < 3) os << "need at least three epsilon values; ";
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 1.0)) os << "epsilon[" << i << "] must lie in (0, 1]; ";
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) os << "epsilons must be strictly decreasing; ";
  }
  if (!(c > 0.0) || !(s > 0.0) || !(n_bar > 0.0)) os << "c, s and n_bar must be positive; ";
  if (n_velocity < 2) os << "n_velocity must be >= 2; ";
  if (!(v_max > 0.0)) os << "v_max must be positive; ";
  if (species.empty()) os << "at least one species is required; ";
  for (const auto& sp : species) {
    if (!(sp.mass > 0.0)) os << "species '" << sp.name << "': mass must be > 0; ";
    if (!(sp.nu > 0.0)) os << "species '" << sp.name << "': nu must be > 0; ";
    if (sp.components.empty()) os << "species '" << sp.name << "': no Maxwellian components; ";
    for (const auto& c : sp.components)
      if (!(c.n > 0.0) || !(c.T > 0.0)) os << "species '" << sp.name << "': components need n > 0, T > 0; ";
  }
  if (!os.str().empty()) fail(ErrorCategory::config, "newtonian probe: " + os.str());
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ProbeResult newtonian_limit_probe(const NewtonianProbeConfig& probe) {
  probe.validate();
  const std::size_t ns = probe.species.size();
  const VelocityGrid vgrid(probe.n_velocity, probe.v_max);

  std::vector<std::vector<double>> f_bar(ns);
  std::vector<double> masses(ns), nu(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const ProbeSpecies& sp = probe.species[i];
    masses[i] = sp.mass;
    nu[i] = sp.nu;
    f_bar[i].assign(vgrid.size(), 0.0);
    for (const auto& comp : sp.components) {
      const std::vector<double> m = sample_maxwellian(vgrid, comp.n, comp.u, comp.T, sp.mass);
      for (std::size_t k = 0; k < m.size(); ++k) f_bar[i][k] += m[k];
    }
  }
  std::vector<std::span<const double>> fb(f_bar.begin(), f_bar.end());
  ProbeResult result;
  result.classical = classical_moments(fb, vgrid, masses, nu);
  const ClassicalMoments& cl = result.classical;

  std::vector<std::vector<double>> maxwellians(ns);
  for (std::size_t i = 0; i < ns; ++i)
    maxwellians[i] = sample_maxwellian(vgrid, cl.n_nr[i], cl.U_nr, cl.T_nr, masses[i]);

  PhysicalConstants consts;
  consts.c = probe.c;
  for (const double eps : probe.epsilons) {
    ProbeRow row;
    row.epsilon = eps;
    try {
      std::vector<SpeciesParams> species;
      std::vector<MomentumGrid> grids;
      std::vector<MomentSet> moments;
      std::vector<double> mu(ns);
      std::vector<std::vector<double>> f(ns);
      for (std::size_t i = 0; i < ns; ++i) {
        const ProbeSpecies& sp = probe.species[i];
        mu[i] = eps * probe.c * sp.mass;
        species.push_back(SpeciesParams::make(sp.name, sp.mass, probe.s / sp.nu, sp.spin));
        grids.emplace_back(probe.n_velocity, mu[i] * probe.v_max, sp.mass, probe.c);
        const double scale = probe.n_bar / (mu[i] * mu[i] * mu[i]);
        f[i].resize(vgrid.size());
        for (std::size_t k = 0; k < f[i].size(); ++k) f[i][k] = scale * f_bar[i][k];
        moments.push_back(compute_moments(f[i], species[i], grids[i], consts));
      }
      const EquilibriumState eq = solve_equilibrium(moments, species, grids, consts, probe.solver);
      row.beta_tilde = eq.beta_tilde;
      row.inv_beta = 1.0 / eq.beta_tilde;
      row.scaled_temperature = 1.0 / (eps * eps * probe.c * probe.c * eq.beta_tilde);
      row.temperature_defect = std::abs(row.scaled_temperature - cl.T_nr);
      row.iterations = eq.iterations;
      CompensatedSum l1;
      double linf = 0.0;
      for (std::size_t i = 0; i < ns; ++i) {
        const std::vector<double> e = juttner_exponentials(grids[i], eq.beta_tilde, eq.U_tilde, consts);
        const double back = mu[i] * mu[i] * mu[i] / probe.n_bar * eq.head[i];
        for (std::size_t k = 0; k < e.size(); ++k) {
          const double d = std::abs(back * e[k] - maxwellians[i][k]);
          l1 += d;
          linf = std::max(linf, d);
        }
      }
      row.l1 = l1.value() * vgrid.cell_volume();
      row.linf = linf;
      row.ok = true;
    } catch (const Error& e) {
      row.error = std::string(to_string(e.category())) + ": " + e.what();
    }
    result.rows.push_back(row);
  }

  std::vector<double> eps, inv_beta, defect, l1;
  for (const auto& r : result.rows) {
    if (!r.ok) continue;
    eps.push_back(r.epsilon);
    inv_beta.push_back(r.inv_beta);
    defect.push_back(r.temperature_defect);
    l1.push_back(r.l1);
    result.fitted_C = std::max(result.fitted_C, r.inv_beta / (r.epsilon * r.epsilon));
  }
  result.slope_inv_beta = loglog_slope(eps, inv_beta);
  result.slope_temperature_defect = loglog_slope(eps, defect);
  result.slope_l1 = loglog_slope(eps, l1);
  result.l1_strictly_decreasing = eps.size() == result.rows.size() && eps.size() >= 2;
  for (std::size_t i = 1; i < l1.size(); ++i)
    if (!(l1[i] < l1[i - 1])) result.l1_strictly_decreasing = false;
  return result;
}

IndifferentiabilityReport indifferentiability_check(const Model& mixture, const SimState& initial,
                                                    double dt, std::size_t steps) {
  mixture.validate();
  const std::size_t ns = mixture.species.size();
  const SpeciesParams& s0 = mixture.species[0];
  const MomentumGrid& g0 = mixture.grids[0];
  for (std::size_t i = 1; i < ns; ++i) {
    const SpeciesParams& si = mixture.species[i];
    const MomentumGrid& gi = mixture.grids[i];
    if (si.mass != s0.mass || si.tau != s0.tau)
      fail(ErrorCategory::config, "indifferentiability needs equal masses and relaxation times");
    if (gi.n_cells() != g0.n_cells() || gi.p_max() != g0.p_max())
      fail(ErrorCategory::config, "indifferentiability needs identical momentum grids");
  }

  Model single = mixture;
  single.species = {SpeciesParams::make("total", s0.mass, s0.tau, 0.0)};
  single.grids = {g0};
  SimState mix = initial;
  SimState one = make_state(single, initial.space);
  one.time = initial.time;
  std::vector<double>& total = one.f.species_values(0);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::vector<double>& fi = initial.f.species_values(i);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += fi[k];
  }

  IndifferentiabilityReport rep;
  const double w = g0.cell_volume() * initial.space.dx;
  for (std::size_t n = 0; n < steps; ++n) {
    strang_step(mixture, mix, dt);
    strang_step(single, one, dt);
    const std::vector<double>& ref = one.f.species_values(0);
    CompensatedSum diff, norm;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < ns; ++i) sum += mix.f.species_values(i)[k];
      diff += std::abs(sum - ref[k]);
      norm += std::abs(ref[k]);
    }
    const double l1 = diff.value() * w;
    const double rel = diff.value() / norm.value();
    rep.l1.push_back(l1);
    rep.relative_l1.push_back(rel);
    rep.max_l1 = std::max(rep.max_l1, l1);
    rep.max_relative_l1 = std::max(rep.max_relative_l1, rel);
    for (std::size_t x = 0; x < mix.space.n_cells; ++x) {
      const FourVector d = mix.equilibria[x].U_tilde - one.equilibria[x].U_tilde;
      double m = 0.0;
      for (std::size_t mu = 0; mu < 4; ++mu) m = std::max(m, std::abs(d[mu]));
      rep.max_U_difference = std::max(rep.max_U_difference, m / mixture.consts.c);
    }
  }
  return rep;
}

namespace {

double relative_em(const FourVector& d, double P0) {
  double m = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu) m = std::max(m, std::abs(d[mu]));
  return m / std::abs(P0);
}

}  // namespace

LedgerSummary conservation_ledger(const Totals& initial, std::span<const StepReport> series,
                                  const ConservationBudget& budget) {
  LedgerSummary s;
  s.steps = series.size();
  const std::size_t ns = initial.mass.size();
  s.mass_drift.assign(ns, 0.0);
  s.mass_drift_relative.assign(ns, 0.0);
  if (series.empty()) return s;
  const Totals& last = series.back().totals;
  for (std::size_t i = 0; i < ns; ++i) {
    s.mass_drift[i] = last.mass[i] - initial.mass[i];
    s.mass_drift_relative[i] = std::abs(s.mass_drift[i]) / std::abs(initial.mass[i]);
    if (!(s.mass_drift_relative[i] <= budget.mass_relative)) s.mass_ok = false;
  }
  s.energy_momentum_drift = last.energy_momentum - initial.energy_momentum;
  s.energy_momentum_drift_relative = relative_em(s.energy_momentum_drift, initial.energy_momentum[0]);
  for (const auto& r : series)
    s.max_step_energy_momentum_defect = std::max(
        s.max_step_energy_momentum_defect, relative_em(r.energy_momentum_change, initial.energy_momentum[0]));
  s.energy_momentum_ok = s.energy_momentum_drift_relative <= budget.energy_momentum_relative;
  return s;
}

std::vector<double> energy_momentum_step_defects(const Model& model, const SimState& state,
                                                 std::span<const double> dts) {
  std::vector<double> out;
  for (const double dt : dts) {
    SimState copy = state;
    const StepReport r = relax_step_0d(model, copy, dt);
    const double P0 = r.totals.energy_momentum[0] - r.energy_momentum_change[0];
    out.push_back(relative_em(r.energy_momentum_change, P0));
  }
  return out;
}

}  // namespace rbgk
