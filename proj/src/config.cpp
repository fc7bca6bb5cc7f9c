#include "rbgk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rbgk/error.hpp"

namespace rbgk {

using nlohmann::json;

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::relax_0d: return "relax-0d";
    case Scenario::mix_1d: return "mix-1d";
    case Scenario::indifferentiability: return "indifferentiability";
    case Scenario::newtonian_sweep: return "newtonian-sweep";
  }
  return "unknown";
}

namespace {

// Collects every violation instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) return;
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key())) error(path + "." + it.key(), "unknown key");
  }

  template <class Check>
  double number(const json& j, const std::string& path, const char* key, double fallback,
                Check ok, const char* constraint) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    const std::string p = path + "." + key;
    if (!v.is_number()) {
      error(p, "expected a number");
      return fallback;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || !ok(x)) {
      std::ostringstream os;
      os << "must satisfy " << constraint << " (got " << x << ")";
      error(p, os.str());
    }
    return x;
  }

  double positive(const json& j, const std::string& path, const char* key, double fallback) {
    return number(j, path, key, fallback, [](double x) { return x > 0.0; }, "> 0");
  }

  long long integer(const json& j, const std::string& path, const char* key, long long fallback,
                    long long min_value) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    const std::string p = path + "." + key;
    if (!v.is_number_integer()) {
      error(p, "expected an integer");
      return fallback;
    }
    const long long x = v.get<long long>();
    if (x < min_value) error(p, "must be >= " + std::to_string(min_value) + " (got " + std::to_string(x) + ")");
    return x;
  }

  bool boolean(const json& j, const std::string& path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) {
      error(path + "." + key, "expected true or false");
      return fallback;
    }
    return j.at(key).get<bool>();
  }

  std::string string(const json& j, const std::string& path, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) {
      error(path + "." + key, "expected a string");
      return fallback;
    }
    return j.at(key).get<std::string>();
  }

  std::array<double, 3> vec3(const json& j, const std::string& path, const char* key) {
    std::array<double, 3> out{};
    if (!j.contains(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 3) {
      error(path + "." + key, "expected an array of three numbers");
      return out;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_number()) {
        error(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out[i] = v[i].get<double>();
    }
    return out;
  }
};

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

JuttnerComponent read_component(Reader& r, const json& j, const std::string& path, double c) {
  JuttnerComponent comp;
  if (!r.object(j, path)) return comp;
  r.allow_keys(j, path, {"density", "velocity", "temperature"});
  comp.density = r.positive(j, path, "density", comp.density);
  comp.temperature = r.positive(j, path, "temperature", comp.temperature);
  comp.velocity = r.vec3(j, path, "velocity");
  if (!(norm3(comp.velocity) < c)) r.error(path + ".velocity", "speed must be below c");
  return comp;
}

SpeciesConfig read_species(Reader& r, const json& j, const std::string& path, double c) {
  SpeciesConfig sp;
  if (!r.object(j, path)) return sp;
  r.allow_keys(j, path, {"name", "mass", "tau", "spin", "initial", "modulation", "p_max"});
  sp.name = r.string(j, path, "name", "");
  if (sp.name.empty()) r.error(path + ".name", "required, non-empty");
  sp.mass = r.positive(j, path, "mass", sp.mass);
  if (!j.contains("mass")) r.error(path + ".mass", "required");
  sp.tau = r.positive(j, path, "tau", sp.tau);
  if (!j.contains("tau")) r.error(path + ".tau", "required");
  sp.spin = r.number(j, path, "spin", 0.0, [](double x) { return x >= 0.0; }, ">= 0");
  if (j.contains("p_max")) sp.p_max = r.positive(j, path, "p_max", 1.0);
  if (!j.contains("initial") || !j.at("initial").is_array() || j.at("initial").empty()) {
    r.error(path + ".initial", "required, a non-empty array of Juttner components");
  } else {
    const json& arr = j.at("initial");
    for (std::size_t i = 0; i < arr.size(); ++i)
      sp.initial.push_back(read_component(r, arr[i], path + ".initial[" + std::to_string(i) + "]", c));
  }
  if (j.contains("modulation")) {
    const json& m = j.at("modulation");
    const std::string mp = path + ".modulation";
    if (r.object(m, mp)) {
      r.allow_keys(m, mp, {"amplitude", "mode", "random"});
      sp.modulation.amplitude =
          r.number(m, mp, "amplitude", 0.0, [](double x) { return x >= 0.0 && x < 1.0; }, "0 <= amplitude < 1");
      sp.modulation.mode = static_cast<int>(r.integer(m, mp, "mode", 1, 0));
      sp.modulation.random = r.boolean(m, mp, "random", false);
    }
  }
  return sp;
}

NewtonianProbeConfig read_probe(Reader& r, const json& j, const std::string& path) {
  NewtonianProbeConfig p;
  if (!r.object(j, path)) return p;
  r.allow_keys(j, path, {"epsilons", "c", "s", "n_bar", "n_velocity", "v_max", "solver_tol", "species"});
  if (!j.contains("epsilons") || !j.at("epsilons").is_array()) {
    r.error(path + ".epsilons", "required, an array of numbers");
  } else {
    for (const auto& e : j.at("epsilons")) {
      if (e.is_number())
        p.epsilons.push_back(e.get<double>());
      else
        r.error(path + ".epsilons", "entries must be numbers");
    }
    if (p.epsilons.size() < 3) r.error(path + ".epsilons", "need at least three values");
    for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
      if (!(p.epsilons[i] > 0.0 && p.epsilons[i] <= 1.0))
        r.error(path + ".epsilons[" + std::to_string(i) + "]", "must lie in (0, 1]");
      if (i > 0 && !(p.epsilons[i] < p.epsilons[i - 1]))
        r.error(path + ".epsilons[" + std::to_string(i) + "]", "values must be strictly decreasing");
    }
  }
  p.c = r.positive(j, path, "c", p.c);
  p.s = r.positive(j, path, "s", p.s);
  p.n_bar = r.positive(j, path, "n_bar", p.n_bar);
  p.n_velocity = static_cast<int>(r.integer(j, path, "n_velocity", p.n_velocity, 2));
  p.v_max = r.positive(j, path, "v_max", p.v_max);
  p.solver.tol = r.positive(j, path, "solver_tol", p.solver.tol);
  if (!j.contains("species") || !j.at("species").is_array() || j.at("species").empty()) {
    r.error(path + ".species", "required, a non-empty array");
    return p;
  }
  const json& arr = j.at("species");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string sp_path = path + ".species[" + std::to_string(i) + "]";
    const json& s = arr[i];
    ProbeSpecies sp;
    if (!r.object(s, sp_path)) continue;
    r.allow_keys(s, sp_path, {"name", "mass", "nu", "spin", "components"});
    sp.name = r.string(s, sp_path, "name", "");
    if (sp.name.empty()) r.error(sp_path + ".name", "required, non-empty");
    sp.mass = r.positive(s, sp_path, "mass", sp.mass);
    if (!s.contains("mass")) r.error(sp_path + ".mass", "required");
    sp.nu = r.positive(s, sp_path, "nu", sp.nu);
    sp.spin = r.number(s, sp_path, "spin", 0.0, [](double x) { return x >= 0.0; }, ">= 0");
    if (!s.contains("components") || !s.at("components").is_array() || s.at("components").empty()) {
      r.error(sp_path + ".components", "required, a non-empty array");
    } else {
      const json& comps = s.at("components");
      for (std::size_t k = 0; k < comps.size(); ++k) {
        const std::string cp = sp_path + ".components[" + std::to_string(k) + "]";
        MaxwellianComponent mc;
        if (!r.object(comps[k], cp)) continue;
        r.allow_keys(comps[k], cp, {"density", "velocity", "temperature"});
        mc.n = r.positive(comps[k], cp, "density", mc.n);
        mc.T = r.positive(comps[k], cp, "temperature", mc.T);
        mc.u = r.vec3(comps[k], cp, "velocity");
        sp.components.push_back(mc);
      }
    }
    p.species.push_back(sp);
  }
  return p;
}

RunConfig read_config(Reader& r, const json& j) {
  RunConfig cfg;
  if (!r.object(j, "config")) return cfg;
  r.allow_keys(j, "config",
               {"scenario", "constants", "species", "momentum_grid", "space", "time", "solver", "budget",
                "output", "seed", "threads", "probe"});

  const std::string scenario = r.string(j, "config", "scenario", "");
  if (scenario == "relax-0d")
    cfg.scenario = Scenario::relax_0d;
  else if (scenario == "mix-1d")
    cfg.scenario = Scenario::mix_1d;
  else if (scenario == "indifferentiability")
    cfg.scenario = Scenario::indifferentiability;
  else if (scenario == "newtonian-sweep")
    cfg.scenario = Scenario::newtonian_sweep;
  else
    r.error("config.scenario",
            "required, one of relax-0d, mix-1d, indifferentiability, newtonian-sweep (got '" + scenario + "')");

  if (j.contains("constants") && r.object(j.at("constants"), "config.constants")) {
    const json& c = j.at("constants");
    r.allow_keys(c, "config.constants", {"c", "k", "h"});
    cfg.constants.c = r.positive(c, "config.constants", "c", 1.0);
    cfg.constants.k = r.positive(c, "config.constants", "k", 1.0);
    cfg.constants.h = r.positive(c, "config.constants", "h", 1.0);
  }

  if (j.contains("momentum_grid") && r.object(j.at("momentum_grid"), "config.momentum_grid")) {
    const json& g = j.at("momentum_grid");
    const std::string p = "config.momentum_grid";
    r.allow_keys(g, p, {"cells", "temperature", "drift", "tail_tol", "cell_average"});
    cfg.momentum_grid.cells = static_cast<int>(r.integer(g, p, "cells", 32, 2));
    cfg.momentum_grid.temperature =
        r.number(g, p, "temperature", 0.0, [](double x) { return x >= 0.0; }, ">= 0");
    cfg.momentum_grid.drift = r.number(g, p, "drift", 0.0, [&](double x) { return x >= 0.0 && x < cfg.constants.c; }, "0 <= drift < c");
    cfg.momentum_grid.tail_tol =
        r.number(g, p, "tail_tol", 1e-12, [](double x) { return x > 0.0 && x < 1.0; }, "0 < tail_tol < 1");
    cfg.momentum_grid.cell_average = r.boolean(g, p, "cell_average", false);
  }

  if (j.contains("space") && r.object(j.at("space"), "config.space")) {
    const json& s = j.at("space");
    r.allow_keys(s, "config.space", {"cells", "dx"});
    cfg.space_cells = static_cast<std::size_t>(r.integer(s, "config.space", "cells", 1, 1));
    cfg.dx = r.positive(s, "config.space", "dx", 1.0);
  }

  if (j.contains("time") && r.object(j.at("time"), "config.time")) {
    const json& t = j.at("time");
    r.allow_keys(t, "config.time", {"dt", "steps", "cfl_max"});
    cfg.dt = r.positive(t, "config.time", "dt", cfg.dt);
    cfg.steps = static_cast<std::size_t>(r.integer(t, "config.time", "steps", 100, 0));
    cfg.cfl_max = r.positive(t, "config.time", "cfl_max", 1.0);
  }

  if (j.contains("solver") && r.object(j.at("solver"), "config.solver")) {
    r.allow_keys(j.at("solver"), "config.solver", {"tol"});
    cfg.solver_tol = r.positive(j.at("solver"), "config.solver", "tol", cfg.solver_tol);
  }

  if (j.contains("budget") && r.object(j.at("budget"), "config.budget")) {
    const json& b = j.at("budget");
    r.allow_keys(b, "config.budget", {"mass_relative", "energy_momentum_relative"});
    cfg.budget.mass_relative = r.positive(b, "config.budget", "mass_relative", cfg.budget.mass_relative);
    cfg.budget.energy_momentum_relative =
        r.positive(b, "config.budget", "energy_momentum_relative", cfg.budget.energy_momentum_relative);
  }

  if (j.contains("output") && r.object(j.at("output"), "config.output")) {
    const json& o = j.at("output");
    r.allow_keys(o, "config.output", {"directory", "every", "snapshot"});
    cfg.output_directory = r.string(o, "config.output", "directory", cfg.output_directory);
    if (cfg.output_directory.empty()) r.error("config.output.directory", "must not be empty");
    cfg.output_every = static_cast<std::size_t>(r.integer(o, "config.output", "every", 1, 1));
    cfg.snapshot = r.boolean(o, "config.output", "snapshot", true);
  }

  cfg.seed = static_cast<std::uint64_t>(r.integer(j, "config", "seed", 0, 0));
  cfg.threads = static_cast<int>(r.integer(j, "config", "threads", 0, 0));

  const bool needs_species = cfg.scenario != Scenario::newtonian_sweep;
  if (j.contains("species")) {
    const json& arr = j.at("species");
    if (!arr.is_array()) {
      r.error("config.species", "expected an array");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i)
        cfg.species.push_back(
            read_species(r, arr[i], "config.species[" + std::to_string(i) + "]", cfg.constants.c));
    }
  }
  if (needs_species && cfg.species.empty()) r.error("config.species", "required, at least one species");
  std::set<std::string> names;
  for (const auto& sp : cfg.species)
    if (!sp.name.empty() && !names.insert(sp.name).second)
      r.error("config.species", "duplicate species name '" + sp.name + "'");

  if (j.contains("probe")) cfg.probe = read_probe(r, j.at("probe"), "config.probe");
  if (cfg.scenario == Scenario::newtonian_sweep && !cfg.probe)
    r.error("config.probe", "required for the newtonian-sweep scenario");

  if (cfg.scenario == Scenario::relax_0d && cfg.space_cells != 1)
    r.error("config.space.cells", "relax-0d needs exactly one spatial cell");
  if (cfg.scenario == Scenario::mix_1d && cfg.space_cells < 2)
    r.error("config.space.cells", "mix-1d needs at least two spatial cells");
  if (cfg.scenario == Scenario::indifferentiability) {
    for (const auto& sp : cfg.species)
      if (!cfg.species.empty() && (sp.mass != cfg.species[0].mass || sp.tau != cfg.species[0].tau ||
                                   sp.p_max != cfg.species[0].p_max))
        r.error("config.species", "indifferentiability needs equal mass, tau and p_max for every species");
  }
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::config, std::string("config is not valid JSON: ") + e.what());
  }
  Reader r;
  RunConfig cfg = read_config(r, j);
  if (!r.errors.empty()) {
    std::ostringstream os;
    os << r.errors.size() << " config violation" << (r.errors.size() == 1 ? "" : "s") << ":";
    for (const auto& e : r.errors) os << "\n  " << e;
    fail(ErrorCategory::config, os.str());
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCategory::io, "error while reading '" + path.string() + "'");
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  j["scenario"] = scenario_name(cfg.scenario);
  j["constants"] = {{"c", cfg.constants.c}, {"k", cfg.constants.k}, {"h", cfg.constants.h}};
  json species = json::array();
  for (const auto& sp : cfg.species) {
    json s = {{"name", sp.name}, {"mass", sp.mass}, {"tau", sp.tau}, {"spin", sp.spin}};
    json init = json::array();
    for (const auto& c : sp.initial)
      init.push_back({{"density", c.density}, {"velocity", c.velocity}, {"temperature", c.temperature}});
    s["initial"] = init;
    s["modulation"] = {{"amplitude", sp.modulation.amplitude},
                       {"mode", sp.modulation.mode},
                       {"random", sp.modulation.random}};
    if (sp.p_max) s["p_max"] = *sp.p_max;
    species.push_back(s);
  }
  j["species"] = species;
  j["momentum_grid"] = {{"cells", cfg.momentum_grid.cells},
                        {"temperature", cfg.momentum_grid.temperature},
                        {"drift", cfg.momentum_grid.drift},
                        {"tail_tol", cfg.momentum_grid.tail_tol},
                        {"cell_average", cfg.momentum_grid.cell_average}};
  j["space"] = {{"cells", cfg.space_cells}, {"dx", cfg.dx}};
  j["time"] = {{"dt", cfg.dt}, {"steps", cfg.steps}, {"cfl_max", cfg.cfl_max}};
  j["solver"] = {{"tol", cfg.solver_tol}};
  j["budget"] = {{"mass_relative", cfg.budget.mass_relative},
                 {"energy_momentum_relative", cfg.budget.energy_momentum_relative}};
  j["output"] = {{"directory", cfg.output_directory}, {"every", cfg.output_every}, {"snapshot", cfg.snapshot}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  if (cfg.probe) {
    const NewtonianProbeConfig& p = *cfg.probe;
    json ps = json::array();
    for (const auto& sp : p.species) {
      json comps = json::array();
      for (const auto& c : sp.components)
        comps.push_back({{"density", c.n}, {"velocity", c.u}, {"temperature", c.T}});
      ps.push_back({{"name", sp.name}, {"mass", sp.mass}, {"nu", sp.nu}, {"spin", sp.spin}, {"components", comps}});
    }
    j["probe"] = {{"epsilons", p.epsilons}, {"c", p.c},          {"s", p.s},
                  {"n_bar", p.n_bar},       {"n_velocity", p.n_velocity}, {"v_max", p.v_max},
                  {"solver_tol", p.solver.tol}, {"species", ps}};
  }
  return j.dump(2) + "\n";
}

Model build_model(const RunConfig& cfg, int threads) {
  Model model;
  model.consts = cfg.constants;
  model.solver.tol = cfg.solver_tol;
  model.cfl_max = cfg.cfl_max;
  model.threads = threads;
  double kT = cfg.momentum_grid.temperature;
  double drift = cfg.momentum_grid.drift;
  for (const auto& sp : cfg.species)
    for (const auto& c : sp.initial) {
      if (cfg.momentum_grid.temperature == 0.0) kT = std::max(kT, c.temperature);
      if (cfg.momentum_grid.drift == 0.0) drift = std::max(drift, norm3(c.velocity));
    }
  for (const auto& sp : cfg.species) {
    model.species.push_back(SpeciesParams::make(sp.name, sp.mass, sp.tau, sp.spin));
    if (sp.p_max)
      model.grids.emplace_back(cfg.momentum_grid.cells, *sp.p_max, sp.mass, cfg.constants.c);
    else
      model.grids.push_back(MomentumGrid::for_juttner(cfg.momentum_grid.cells, sp.mass, cfg.constants.c, kT,
                                                      drift, cfg.momentum_grid.tail_tol));
  }
  model.validate();
  return model;
}

SimState build_initial_state(const RunConfig& cfg, const Model& model) {
  SpatialGrid space;
  space.n_cells = cfg.space_cells;
  space.dx = cfg.dx;
  SimState state = make_state(model, space);
  std::mt19937_64 rng(cfg.seed);
  const JuttnerSampling mode = cfg.momentum_grid.cell_average ? JuttnerSampling::cell_average : JuttnerSampling::point;
  const double c = model.consts.c;
  for (std::size_t i = 0; i < cfg.species.size(); ++i) {
    const SpeciesConfig& sp = cfg.species[i];
    std::vector<double> base(model.grids[i].size(), 0.0);
    for (const auto& comp : sp.initial) {
      const FourVector U = four_velocity_from_velocity(comp.velocity[0], comp.velocity[1], comp.velocity[2], c);
      const std::vector<double> f = sample_juttner(model.grids[i], comp.density, U, comp.temperature, model.consts, mode);
      for (std::size_t k = 0; k < f.size(); ++k) base[k] += f[k];
    }
    for (std::size_t x = 0; x < space.n_cells; ++x) {
      double factor = 1.0;
      const Modulation& m = sp.modulation;
      if (m.amplitude > 0.0) {
        if (m.random) {
          // 53 random bits mapped to [0, 1); identical on every platform.
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          factor = 1.0 + m.amplitude * (2.0 * u - 1.0);
        } else {
          const double phase = 2.0 * std::numbers::pi * m.mode * (static_cast<double>(x) + 0.5) /
                               static_cast<double>(space.n_cells);
          factor = 1.0 + m.amplitude * std::cos(phase);
        }
      }
      const std::span<double> cell = state.f.cell(i, x);
      for (std::size_t k = 0; k < base.size(); ++k) cell[k] = factor * base[k];
    }
  }
  return state;
}

}  // namespace rbgk
