#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "rbgk/dynamics.hpp"

namespace rbgk {

/// Text snapshot of a run: constants, spatial grid, per-species parameters,
/// grid descriptor, raw values and per-cell moments, plus an FNV-1a checksum
/// of the raw values.
///
///   {"format": "rbgk-snapshot", "version": 1, "time": t,
///    "constants": {"c", "k", "h"}, "space": {"cells", "dx"},
///    "species": [{"name", "mass", "tau", "spin", "degeneracy",
///                 "grid": {"cells", "p_max"}, "values": [...],
///                 "moments": [{"n", "U", "rho", "kT"} per cell]}],
///    "checksum": "fnv1a64:<16 hex digits>"}
///
/// Values are stored in shortest round-trip form, so loading reproduces the
/// field bit for bit. Moments are informational and ignored on load.
std::string encode_snapshot(const Model& model, const SimState& state);

struct LoadedSnapshot {
  Model model;  // species, grids and constants; solver settings are defaults
  SimState state;
};

/// Throws an io error on malformed input or checksum mismatch.
LoadedSnapshot decode_snapshot(const std::string& text);

void save_snapshot(const std::filesystem::path& path, const Model& model, const SimState& state);
LoadedSnapshot load_snapshot(const std::filesystem::path& path);

/// FNV-1a over the IEEE-754 bytes (little-endian order) of every value.
std::uint64_t checksum_values(std::span<const double> values, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace rbgk
