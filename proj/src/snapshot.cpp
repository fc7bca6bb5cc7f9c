#include "rbgk/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "json.hpp"

#include "rbgk/diagnostics.hpp"
#include "rbgk/error.hpp"
#include "rbgk/io.hpp"

namespace rbgk {

using nlohmann::json;

std::uint64_t checksum_values(std::span<const double> values, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (const double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return std::string("fnv1a64:") + buf;
}

std::uint64_t field_checksum(const DistributionField& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t s = 0; s < f.species_count(); ++s) h = checksum_values(f.species_values(s), h);
  return h;
}

}  // namespace

std::string encode_snapshot(const Model& model, const SimState& state) {
  json j;
  j["format"] = "rbgk-snapshot";
  j["version"] = 1;
  j["time"] = state.time;
  j["constants"] = {{"c", model.consts.c}, {"k", model.consts.k}, {"h", model.consts.h}};
  j["space"] = {{"cells", state.space.n_cells}, {"dx", state.space.dx}};
  json species = json::array();
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    const SpeciesParams& sp = model.species[i];
    const MomentumGrid& g = model.grids[i];
    json moments = json::array();
    for (std::size_t x = 0; x < state.space.n_cells; ++x) {
      json m;
      try {
        const MomentSet ms = compute_moments(state.f.cell(i, x), sp, g, model.consts);
        m = {{"n", ms.n},
             {"U", {ms.U[0], ms.U[1], ms.U[2], ms.U[3]}},
             {"rho", ms.rho},
             {"kT", temperature_proxy(ms, sp, model.consts)}};
      } catch (const Error&) {
        m = nullptr;  // vacuum or unresolved cell; values are still stored
      }
      moments.push_back(m);
    }
    species.push_back({{"name", sp.name},
                       {"mass", sp.mass},
                       {"tau", sp.tau},
                       {"spin", sp.spin},
                       {"degeneracy", sp.degeneracy},
                       {"grid", {{"cells", g.n_cells()}, {"p_max", g.p_max()}}},
                       {"values", state.f.species_values(i)},
                       {"moments", moments}});
  }
  j["species"] = species;
  j["checksum"] = hex64(field_checksum(state.f));
  return j.dump() + "\n";
}

LoadedSnapshot decode_snapshot(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "rbgk-snapshot" || j.at("version") != 1)
      fail(ErrorCategory::io, "not a version 1 snapshot");
    LoadedSnapshot out;
    const json& c = j.at("constants");
    out.model.consts.c = c.at("c").get<double>();
    out.model.consts.k = c.at("k").get<double>();
    out.model.consts.h = c.at("h").get<double>();
    SpatialGrid space;
    space.n_cells = j.at("space").at("cells").get<std::size_t>();
    space.dx = j.at("space").at("dx").get<double>();
    for (const json& s : j.at("species")) {
      out.model.species.push_back(SpeciesParams::make(s.at("name").get<std::string>(), s.at("mass").get<double>(),
                                                      s.at("tau").get<double>(), s.at("spin").get<double>()));
      out.model.grids.emplace_back(s.at("grid").at("cells").get<int>(), s.at("grid").at("p_max").get<double>(),
                                   s.at("mass").get<double>(), out.model.consts.c);
    }
    out.model.validate();
    out.state = make_state(out.model, space);
    out.state.time = j.at("time").get<double>();
    std::size_t i = 0;
    for (const json& s : j.at("species")) {
      std::vector<double> values = s.at("values").get<std::vector<double>>();
      if (values.size() != out.state.f.species_values(i).size())
        fail(ErrorCategory::io, "snapshot species '" + out.model.species[i].name + "' has the wrong number of values");
      out.state.f.species_values(i) = std::move(values);
      ++i;
    }
    const std::string expected = j.at("checksum").get<std::string>();
    const std::string actual = hex64(field_checksum(out.state.f));
    if (expected != actual) fail(ErrorCategory::io, "snapshot checksum mismatch: file says " + expected + ", data gives " + actual);
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCategory::io, std::string("malformed snapshot: ") + e.what());
  }
}

void save_snapshot(const std::filesystem::path& path, const Model& model, const SimState& state) {
  write_file_atomic(path, encode_snapshot(model, state));
}

LoadedSnapshot load_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

}  // namespace rbgk
