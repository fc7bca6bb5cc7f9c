#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbgk/diagnostics.hpp"
#include "rbgk/dynamics.hpp"

namespace rbgk {

enum class Scenario { relax_0d, mix_1d, indifferentiability, newtonian_sweep };

std::string scenario_name(Scenario s);

/// One drifting Juttner component of a species' initial data.
struct JuttnerComponent {
  double density = 1.0;
  std::array<double, 3> velocity{};  // ordinary velocity, |v| < c
  double temperature = 1.0;          // kT

  bool operator==(const JuttnerComponent&) const = default;
};

/// Multiplicative density modulation across spatial cells:
/// 1 + amplitude cos(2 pi mode (x + 1/2) / n_cells), or 1 + amplitude (2u - 1)
/// with u uniform from the seeded generator when random is set.
struct Modulation {
  double amplitude = 0.0;
  int mode = 1;
  bool random = false;

  bool operator==(const Modulation&) const = default;
};

struct SpeciesConfig {
  std::string name;
  double mass = 1.0;
  double tau = 1.0;
  double spin = 0.0;
  std::vector<JuttnerComponent> initial;
  Modulation modulation;
  // Explicit grid extent; when absent the extent follows MomentumGridConfig.
  std::optional<double> p_max;

  bool operator==(const SpeciesConfig&) const = default;
};

struct MomentumGridConfig {
  int cells = 32;
  double temperature = 0.0;  // kT used to size the grid; 0 means the hottest initial component
  double drift = 0.0;        // speed used to size the grid; 0 means the fastest initial component
  double tail_tol = 1e-12;
  bool cell_average = false;  // initialise with cell averages instead of point values

  bool operator==(const MomentumGridConfig&) const = default;
};

struct RunConfig {
  Scenario scenario = Scenario::relax_0d;
  PhysicalConstants constants;
  std::vector<SpeciesConfig> species;
  MomentumGridConfig momentum_grid;
  std::size_t space_cells = 1;
  double dx = 1.0;
  double dt = 0.01;
  std::size_t steps = 100;
  double cfl_max = 1.0;
  double solver_tol = 1e-12;
  ConservationBudget budget;
  std::size_t output_every = 1;
  bool snapshot = true;
  std::string output_directory = "out";
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = not set
  std::optional<NewtonianProbeConfig> probe;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws a config error whose message lists every
/// violation found, one per line.
RunConfig parse_config_text(const std::string& text);

/// Reads the file (io error if unreadable) and parses it.
RunConfig parse_config(const std::filesystem::path& path);

/// JSON text with every field present, defaults included.
std::string serialize_config(const RunConfig& config);

/// Species, grids, constants and solver settings of a run.
Model build_model(const RunConfig& config, int threads);

/// Initial distribution on the model's grids.
SimState build_initial_state(const RunConfig& config, const Model& model);

}  // namespace rbgk
