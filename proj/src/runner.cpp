#include "rbgk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "rbgk/error.hpp"
#include "rbgk/io.hpp"
#include "rbgk/parallel.hpp"
#include "rbgk/snapshot.hpp"

namespace rbgk {

using nlohmann::json;

namespace {

std::filesystem::path output_dir(const RunConfig& cfg, const RunOptions& opt) {
  return opt.out_dir.empty() ? std::filesystem::path(cfg.output_directory) : opt.out_dir;
}

void log_line(const RunOptions& opt, const std::string& msg) {
  if (opt.verbose && opt.log) *opt.log << msg << '\n' << std::flush;
}

// NaN marks a value that does not exist yet; CSV readers see an empty field.
std::string fmt(double x) { return std::isnan(x) ? std::string() : format_double(x); }

// Writes a JSON document atomically and records it.
void write_json(RunOutcome& out, const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
  out.files.push_back(path);
}

void write_text(RunOutcome& out, const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, text);
  out.files.push_back(path);
}

json check(double value, double budget, bool pass) {
  return {{"value", value}, {"budget", budget}, {"pass", pass}};
}

}  // namespace

std::vector<MomentSet> domain_average_moments(const Model& model, const SimState& state) {
  std::vector<MomentSet> out;
  const double inv = 1.0 / static_cast<double>(state.space.n_cells);
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    std::vector<double> avg(model.grids[i].size(), 0.0);
    for (std::size_t x = 0; x < state.space.n_cells; ++x) {
      const auto cell = state.f.cell(i, x);
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += cell[k];
    }
    for (double& v : avg) v *= inv;
    out.push_back(compute_moments(avg, model.species[i], model.grids[i], model.consts));
  }
  return out;
}

namespace {

std::string series_header(const Model& model) {
  std::ostringstream os;
  os << "step,t,dt";
  for (const auto& sp : model.species) {
    const std::string& s = sp.name;
    os << ",N_" << s << ",n_" << s << ",U1_" << s << ",U2_" << s << ",U3_" << s << ",kT_" << s;
  }
  os << ",kT_tilde,P0,P1,P2,P3,S0,entropy_change,h_monitor,beta_iterations,beta_residual\n";
  return os.str();
}

std::string series_row(const Model& model, const SimState& state, std::size_t step, const StepReport* r,
                       const Totals& totals) {
  std::ostringstream os;
  os << step << ',' << fmt(state.time) << ',' << fmt(r ? r->dt : 0.0);
  const std::vector<MomentSet> m = domain_average_moments(model, state);
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    os << ',' << fmt(totals.mass[i]) << ',' << fmt(m[i].n) << ',' << fmt(m[i].U[1]) << ',' << fmt(m[i].U[2]) << ','
       << fmt(m[i].U[3]) << ',' << fmt(temperature_proxy(m[i], model.species[i], model.consts));
  }
  double kT = std::numeric_limits<double>::quiet_NaN();
  if (r) {
    kT = 0.0;
    for (const auto& eq : state.equilibria) kT += eq.T_tilde;
    kT /= static_cast<double>(state.equilibria.size());
  }
  os << ',' << fmt(kT);
  for (std::size_t mu = 0; mu < 4; ++mu) os << ',' << fmt(totals.energy_momentum[mu]);
  os << ',' << fmt(totals.entropy) << ',' << fmt(r ? r->entropy_change : 0.0) << ','
     << fmt(r ? r->h_monitor : 0.0) << ',' << (r ? r->solver_iterations : 0) << ','
     << fmt(r ? r->solver_residual : 0.0) << '\n';
  return os.str();
}

std::string profile_csv(const Model& model, const SimState& state) {
  std::ostringstream os;
  os << "cell,x,species,n,U1,U2,U3,kT,kT_tilde\n";
  for (std::size_t x = 0; x < state.space.n_cells; ++x)
    for (std::size_t i = 0; i < model.species.size(); ++i) {
      const MomentSet m = compute_moments(state.f.cell(i, x), model.species[i], model.grids[i], model.consts);
      const double kT_tilde = state.equilibria[x].beta_tilde > 0.0 ? state.equilibria[x].T_tilde
                                                                   : std::numeric_limits<double>::quiet_NaN();
      os << x << ',' << fmt((static_cast<double>(x) + 0.5) * state.space.dx) << ',' << model.species[i].name << ','
         << fmt(m.n) << ',' << fmt(m.U[1]) << ',' << fmt(m.U[2]) << ',' << fmt(m.U[3]) << ','
         << fmt(temperature_proxy(m, model.species[i], model.consts)) << ',' << fmt(kT_tilde) << '\n';
    }
  return os.str();
}

json ledger_json(const LedgerSummary& l, const Model& model, const ConservationBudget& budget) {
  json mass = json::array();
  for (std::size_t i = 0; i < l.mass_drift.size(); ++i)
    mass.push_back({{"species", model.species[i].name},
                    {"drift", l.mass_drift[i]},
                    {"relative", l.mass_drift_relative[i]},
                    {"budget", budget.mass_relative},
                    {"pass", l.mass_drift_relative[i] <= budget.mass_relative}});
  return {{"steps", l.steps},
          {"mass", mass},
          {"energy_momentum",
           {{"drift", {l.energy_momentum_drift[0], l.energy_momentum_drift[1], l.energy_momentum_drift[2],
                       l.energy_momentum_drift[3]}},
            {"relative", l.energy_momentum_drift_relative},
            {"max_step_relative", l.max_step_energy_momentum_defect},
            {"budget", budget.energy_momentum_relative},
            {"pass", l.energy_momentum_ok}}}};
}

}  // namespace

RunOutcome run_simulation(const RunConfig& cfg, const RunOptions& opt) {
  const std::filesystem::path dir = output_dir(cfg, opt);
  const int threads = resolve_thread_count(opt.threads, cfg.threads);
  const Model model = build_model(cfg, threads);
  SimState state = build_initial_state(cfg, model);
  const Totals initial = compute_totals(model, state);

  RunOutcome out;
  std::string csv = series_header(model) + series_row(model, state, 0, nullptr, initial);
  std::vector<StepReport> series;
  series.reserve(cfg.steps);
  double h_max = -std::numeric_limits<double>::infinity();
  double min_entropy_step = std::numeric_limits<double>::infinity();
  double total_mass = 0.0;
  for (double m : initial.mass) total_mass += m;

  auto summary_base = [&](const char* status) {
    json s;
    s["scenario"] = scenario_name(cfg.scenario);
    s["status"] = status;
    s["steps_completed"] = series.size();
    s["time"] = state.time;
    s["threads"] = threads;
    return s;
  };

  RunControl control;
  control.dt = cfg.dt;
  control.steps = cfg.steps;
  control.report_every = 1;
  std::size_t step = 0;
  try {
    run_steps(model, state, control, [&](const SimState& s, const StepReport& r) {
      ++step;
      series.push_back(r);
      h_max = std::max(h_max, r.h_monitor);
      min_entropy_step = std::min(min_entropy_step, r.entropy_change / (model.consts.k * total_mass));
      if (step % cfg.output_every == 0 || step == cfg.steps) csv += series_row(model, s, step, &r, r.totals);
      if (opt.verbose && (step % std::max<std::size_t>(cfg.steps / 20, 1) == 0 || step == cfg.steps)) {
        std::ostringstream os;
        os << "step " << step << "/" << cfg.steps << " t=" << s.time << " h=" << r.h_monitor
           << " beta_iter=" << r.solver_iterations;
        log_line(opt, os.str());
      }
    });
  } catch (const Error& e) {
    write_text(out, dir / "series.csv", csv);
    json s = summary_base("failed");
    s["error"] = {{"category", std::string(to_string(e.category()))}, {"message", e.what()}};
    write_json(out, dir / "summary.json", s);
    throw;
  }

  write_text(out, dir / "series.csv", csv);
  if (state.space.n_cells > 1) write_text(out, dir / "profile.csv", profile_csv(model, state));
  if (cfg.snapshot) {
    save_snapshot(dir / "snapshot.json", model, state);
    out.files.push_back(dir / "snapshot.json");
  }

  const LedgerSummary ledger = conservation_ledger(initial, series, cfg.budget);
  const bool h_ok = series.empty() || h_max <= 1e-13;
  json s = summary_base("ok");
  s["conservation"] = ledger_json(ledger, model, cfg.budget);
  s["h_theorem"] = check(series.empty() ? 0.0 : h_max, 1e-13, h_ok);
  if (state.space.n_cells == 1)
    s["entropy_step_min_per_particle"] = check(series.empty() ? 0.0 : min_entropy_step, -1e-12,
                                               series.empty() || min_entropy_step >= -1e-12);
  out.passed = ledger.mass_ok && ledger.energy_momentum_ok && h_ok &&
               (state.space.n_cells > 1 || series.empty() || min_entropy_step >= -1e-12);
  s["pass"] = out.passed;
  write_json(out, dir / "summary.json", s);
  return out;
}

std::string probe_table_csv(const ProbeResult& r) {
  std::ostringstream os;
  os << "epsilon,ok,beta_tilde,inv_beta,scaled_temperature,T_nr,temperature_defect,l1,linf,iterations,error\n";
  for (const auto& row : r.rows) {
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << fmt(row.epsilon) << ',' << (row.ok ? 1 : 0) << ',' << fmt(row.beta_tilde) << ',' << fmt(row.inv_beta)
       << ',' << fmt(row.scaled_temperature) << ',' << fmt(r.classical.T_nr) << ',' << fmt(row.temperature_defect)
       << ',' << fmt(row.l1) << ',' << fmt(row.linf) << ',' << row.iterations << ',' << err << '\n';
  }
  return os.str();
}

RunOutcome run_newtonian_probe(const RunConfig& cfg, const RunOptions& opt) {
  if (!cfg.probe) fail(ErrorCategory::config, "config has no probe section");
  const std::filesystem::path dir = output_dir(cfg, opt);
  log_line(opt, "newtonian probe over " + std::to_string(cfg.probe->epsilons.size()) + " epsilon values");
  const ProbeResult r = newtonian_limit_probe(*cfg.probe);
  RunOutcome out;
  write_text(out, dir / "probe.csv", probe_table_csv(r));

  const auto in_band = [](double s) { return s >= 1.7 && s <= 2.3; };
  json s;
  s["scenario"] = "newtonian-sweep";
  s["status"] = "ok";
  s["T_nr"] = r.classical.T_nr;
  s["U_nr"] = r.classical.U_nr;
  s["fitted_C"] = r.fitted_C;
  s["slope_inv_beta"] = {{"value", r.slope_inv_beta}, {"band", {1.7, 2.3}}, {"pass", in_band(r.slope_inv_beta)}};
  s["slope_temperature_defect"] = {
      {"value", r.slope_temperature_defect}, {"band", {1.7, 2.3}}, {"pass", in_band(r.slope_temperature_defect)}};
  s["slope_l1"] = r.slope_l1;
  s["l1_strictly_decreasing"] = r.l1_strictly_decreasing;
  std::size_t failed = 0;
  for (const auto& row : r.rows) failed += row.ok ? 0 : 1;
  s["failed_epsilons"] = failed;
  out.passed = failed == 0 && in_band(r.slope_inv_beta) && in_band(r.slope_temperature_defect) &&
               r.l1_strictly_decreasing;
  s["pass"] = out.passed;
  write_json(out, dir / "summary.json", s);
  return out;
}

RunOutcome run_indifferentiability(const RunConfig& cfg, const RunOptions& opt) {
  const std::filesystem::path dir = output_dir(cfg, opt);
  const int threads = resolve_thread_count(opt.threads, cfg.threads);
  const Model model = build_model(cfg, threads);
  const SimState state = build_initial_state(cfg, model);
  log_line(opt, "indifferentiability check over " + std::to_string(cfg.steps) + " steps");
  const IndifferentiabilityReport rep = indifferentiability_check(model, state, cfg.dt, cfg.steps);
  RunOutcome out;
  std::ostringstream csv;
  csv << "step,l1,relative_l1\n";
  for (std::size_t n = 0; n < rep.l1.size(); ++n)
    csv << n + 1 << ',' << fmt(rep.l1[n]) << ',' << fmt(rep.relative_l1[n]) << '\n';
  write_text(out, dir / "indifferentiability.csv", csv.str());
  json s;
  s["scenario"] = "indifferentiability";
  s["status"] = "ok";
  s["steps"] = rep.l1.size();
  s["max_l1"] = check(rep.max_l1, 1e-10, rep.max_l1 <= 1e-10);
  s["max_relative_l1"] = rep.max_relative_l1;
  s["max_U_difference"] = rep.max_U_difference;
  out.passed = rep.max_l1 <= 1e-10;
  s["pass"] = out.passed;
  write_json(out, dir / "summary.json", s);
  return out;
}

RunOutcome run_scenario(const RunConfig& cfg, const RunOptions& opt) {
  switch (cfg.scenario) {
    case Scenario::relax_0d:
    case Scenario::mix_1d: return run_simulation(cfg, opt);
    case Scenario::indifferentiability: return run_indifferentiability(cfg, opt);
    case Scenario::newtonian_sweep: return run_newtonian_probe(cfg, opt);
  }
  fail(ErrorCategory::internal, "unknown scenario");
}

RunOutcome emit_plot_data(const Model& model, const SimState& state, const std::filesystem::path& dir) {
  std::ostringstream os;
  os << "cell,species,px,f,J\n";
  for (std::size_t x = 0; x < state.space.n_cells; ++x) {
    std::vector<MomentSet> moments;
    std::vector<std::span<const double>> spans;
    for (std::size_t i = 0; i < model.species.size(); ++i) {
      spans.push_back(state.f.cell(i, x));
      moments.push_back(compute_moments(spans.back(), model.species[i], model.grids[i], model.consts));
    }
    const EquilibriumState eq = solve_equilibrium(moments, model.species, model.grids, model.consts, model.solver);
    const std::vector<std::vector<double>> J = build_attractor(spans, eq, model.grids, model.species, model.consts);
    for (std::size_t i = 0; i < model.species.size(); ++i) {
      const MomentumGrid& g = model.grids[i];
      const int mid = g.n_cells() / 2;
      for (int ix = 0; ix < g.n_cells(); ++ix) {
        const std::size_t k = g.index(ix, mid, mid);
        os << x << ',' << model.species[i].name << ',' << fmt(g.axis(ix)) << ',' << fmt(spans[i][k]) << ','
           << fmt(J[i][k]) << '\n';
      }
    }
  }
  RunOutcome out;
  write_text(out, dir / "slices.csv", os.str());
  SimState with_eq = state;
  for (std::size_t x = 0; x < state.space.n_cells; ++x) {
    std::vector<MomentSet> moments;
    for (std::size_t i = 0; i < model.species.size(); ++i)
      moments.push_back(compute_moments(state.f.cell(i, x), model.species[i], model.grids[i], model.consts));
    with_eq.equilibria[x] = solve_equilibrium(moments, model.species, model.grids, model.consts, model.solver);
  }
  write_text(out, dir / "profile.csv", profile_csv(model, with_eq));
  return out;
}

}  // namespace rbgk
