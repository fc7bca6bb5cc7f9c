#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "rbgk/config.hpp"
#include "rbgk/error.hpp"
#include "rbgk/io.hpp"
#include "rbgk/runner.hpp"

using namespace rbgk;
namespace fs = std::filesystem;

namespace {

const char* small_1d = R"({
  "scenario": "mix-1d",
  "species": [
    {"name": "a", "mass": 1, "tau": 1, "spin": 0.5,
     "initial": [{"density": 1, "velocity": [0.1, 0, 0], "temperature": 0.05}],
     "modulation": {"amplitude": 0.2, "mode": 1}},
    {"name": "b", "mass": 2, "tau": 0.5,
     "initial": [{"density": 0.5, "velocity": [-0.1, 0, 0], "temperature": 0.03}],
     "modulation": {"amplitude": 0.1, "random": true}}
  ],
  "momentum_grid": {"cells": 8, "tail_tol": 1e-8},
  "space": {"cells": 6, "dx": 0.5},
  "time": {"dt": 0.05, "steps": 6, "cfl_max": 0.9},
  "output": {"every": 2},
  "seed": 42
})";

const char* small_probe = R"({
  "scenario": "newtonian-sweep",
  "probe": {"epsilons": [0.2, 0.1, 0.05], "n_velocity": 20, "v_max": 6,
            "species": [{"name": "a", "mass": 1, "nu": 1,
                         "components": [{"density": 1, "velocity": [0.3, 0, 0], "temperature": 0.8}]},
                        {"name": "b", "mass": 2, "nu": 0.5,
                         "components": [{"density": 0.7, "velocity": [-0.2, 0, 0], "temperature": 0.5}]}]}
})";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "rbgk_runner_test" / name;
  fs::remove_all(p);
  return p;
}

RunOptions to(const fs::path& dir, int threads = 1) {
  RunOptions o;
  o.out_dir = dir;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("1D run writes its outputs and is bit-reproducible across thread counts") {
  const RunConfig cfg = parse_config_text(small_1d);
  const fs::path a = scratch("a"), b = scratch("b");
  const RunOutcome ra = run_scenario(cfg, to(a, 1));
  run_scenario(cfg, to(b, 3));
  CHECK(ra.passed);
  for (const char* f : {"series.csv", "profile.csv", "snapshot.json", "summary.json"}) CHECK(fs::exists(a / f));
  CHECK(read_file(a / "series.csv") == read_file(b / "series.csv"));
  CHECK(read_file(a / "profile.csv") == read_file(b / "profile.csv"));
  CHECK(read_file(a / "snapshot.json") == read_file(b / "snapshot.json"));
  // header plus rows for steps 0, 2, 4, 6
  const std::string series = read_file(a / "series.csv");
  CHECK(std::count(series.begin(), series.end(), '\n') == 5);
  CHECK(series.rfind("step,t,dt,N_a,n_a,U1_a", 0) == 0);
  const auto summary = nlohmann::json::parse(read_file(a / "summary.json"));
  CHECK(summary["pass"] == true);
  CHECK(summary["steps_completed"] == 6);
  CHECK(summary["conservation"]["mass"][0]["pass"] == true);
  // no temporaries left behind
  for (const auto& e : fs::directory_iterator(a)) CHECK(e.path().string().find(".tmp") == std::string::npos);
}

TEST_CASE("a failing run flushes the partial series and a failed summary") {
  RunConfig cfg = parse_config_text(small_1d);
  cfg.dt = 5.0;  // CFL far above the bound
  const fs::path d = scratch("fail");
  try {
    run_scenario(cfg, to(d));
    FAIL("expected CFL violation");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::cfl_violation);
  }
  CHECK(fs::exists(d / "series.csv"));
  const auto summary = nlohmann::json::parse(read_file(d / "summary.json"));
  CHECK(summary["status"] == "failed");
  CHECK(summary["error"]["category"] == "cfl_violation");
}

TEST_CASE("probe table matches the diagnostics result byte for byte") {
  const RunConfig cfg = parse_config_text(small_probe);
  const fs::path d = scratch("probe");
  const RunOutcome r = run_scenario(cfg, to(d));
  CHECK(read_file(d / "probe.csv") == probe_table_csv(newtonian_limit_probe(*cfg.probe)));
  const auto summary = nlohmann::json::parse(read_file(d / "summary.json"));
  CHECK(summary["pass"] == r.passed);
  CHECK(summary["slope_inv_beta"]["value"].get<double>() > 1.7);
}

TEST_CASE("plot data from a state") {
  const RunConfig cfg = parse_config_text(small_1d);
  const Model m = build_model(cfg, 1);
  const SimState s = build_initial_state(cfg, m);
  const fs::path d = scratch("plot");
  const RunOutcome r = emit_plot_data(m, s, d);
  CHECK(r.files.size() == 2);
  const std::string slices = read_file(d / "slices.csv");
  // 6 cells x 2 species x 8 nodes plus the header
  CHECK(std::count(slices.begin(), slices.end(), '\n') == 97);
}
