#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbgk/config.hpp"
#include "rbgk/diagnostics.hpp"

namespace rbgk {

struct RunOptions {
  std::filesystem::path out_dir;  // empty: use the config's output directory
  int threads = 0;                // 0: RBGK_THREADS, then the config, then 1
  bool verbose = false;
  std::ostream* log = nullptr;  // progress lines when verbose
};

struct RunOutcome {
  std::vector<std::filesystem::path> files;  // written outputs
  bool passed = true;                        // every budget or criterion in the summary held
};

/// Dispatches on config.scenario.
RunOutcome run_scenario(const RunConfig& config, const RunOptions& options);

/// relax-0d and mix-1d: series.csv, summary.json, snapshot.json and, for
/// more than one cell, profile.csv. On failure the series so far and a
/// summary with the error are written before the error propagates.
RunOutcome run_simulation(const RunConfig& config, const RunOptions& options);

/// probe.csv and summary.json from config.probe.
RunOutcome run_newtonian_probe(const RunConfig& config, const RunOptions& options);

/// indifferentiability.csv and summary.json; the species in the config must
/// share mass, tau and grid.
RunOutcome run_indifferentiability(const RunConfig& config, const RunOptions& options);

/// Slices of f and of its attractor along p_x through the grid centre, per
/// species and cell (slices.csv), plus per-cell moments (profile.csv).
RunOutcome emit_plot_data(const Model& model, const SimState& state, const std::filesystem::path& out_dir);

/// Text of probe.csv for a probe result.
std::string probe_table_csv(const ProbeResult& result);

/// Moments of the spatially averaged distribution of every species.
std::vector<MomentSet> domain_average_moments(const Model& model, const SimState& state);

}  // namespace rbgk
