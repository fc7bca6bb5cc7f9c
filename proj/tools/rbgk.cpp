// Command-line front end: rbgk <subcommand> [--config FILE | FILE] [--out DIR]
// [--threads N] [--verbose]. Errors go to stderr as one JSON line with the
// category and the process exits with the category's code.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rbgk/config.hpp"
#include "rbgk/error.hpp"
#include "rbgk/parallel.hpp"
#include "rbgk/runner.hpp"
#include "rbgk/snapshot.hpp"

namespace {

using rbgk::ErrorCategory;

int report_error(ErrorCategory cat, const std::string& message) {
  nlohmann::json j = {{"status", "error"},
                      {"category", std::string(rbgk::to_string(cat))},
                      {"exit_code", rbgk::exit_code(cat)},
                      {"message", message}};
  std::cerr << j.dump() << '\n';
  return rbgk::exit_code(cat);
}

void report_outcome(const std::string& command, const rbgk::RunOutcome& outcome) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : outcome.files) files.push_back(f.string());
  nlohmann::json j = {{"status", "ok"}, {"command", command}, {"pass", outcome.passed}, {"files", files}};
  std::cout << j.dump() << '\n';
}

struct Common {
  std::string config;
  std::string positional;
  std::string out;
  std::string snapshot;
  int threads = 0;
  bool verbose = false;

  std::string config_path() const {
    if (!config.empty() && !positional.empty() && config != positional)
      rbgk::fail(ErrorCategory::usage, "config given both as --config and as an argument");
    const std::string p = config.empty() ? positional : config;
    if (p.empty()) rbgk::fail(ErrorCategory::usage, "a config file is required (--config FILE)");
    return p;
  }

  rbgk::RunOptions options() const {
    rbgk::RunOptions o;
    o.out_dir = out;
    o.threads = threads;
    o.verbose = verbose;
    o.log = &std::cerr;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Scenario config file (JSON)");
  sub->add_option("config_file", c.positional, "Scenario config file (alternative to --config)");
  sub->add_option("--out", c.out, "Output directory (overrides the config)");
  sub->add_option("--threads", c.threads, "Worker threads (overrides RBGK_THREADS and the config)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--verbose", c.verbose, "Progress and solver diagnostics on stderr");
}

int finish(const std::string& command, const rbgk::RunOutcome& outcome) {
  report_outcome(command, outcome);
  if (!outcome.passed) return report_error(ErrorCategory::check_failed, command + ": a budget or criterion failed; see summary.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic BGK mixture solver and verification suite"};
  app.require_subcommand(1);
  Common common;

  CLI::App* run = app.add_subcommand("run", "Run the scenario named in the config");
  add_common(run, common);
  CLI::App* probe = app.add_subcommand("probe-newtonian", "Newtonian-limit sweep from the config's probe section");
  add_common(probe, common);
  CLI::App* indiff = app.add_subcommand("check-indifferentiability",
                                        "Mixture of equal species against the single-species model");
  add_common(indiff, common);
  CLI::App* validate = app.add_subcommand("validate-config", "Parse and validate a config, listing every violation");
  add_common(validate, common);
  CLI::App* plot = app.add_subcommand("emit-plot-data", "Write CSV slices of f and its attractor");
  add_common(plot, common);
  plot->add_option("--snapshot", common.snapshot, "Use this snapshot instead of the config's initial state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorCategory::usage, e.what());
  }

  try {
    if (*validate) {
      const rbgk::RunConfig cfg = rbgk::parse_config(common.config_path());
      nlohmann::json j = {{"status", "ok"}, {"command", "validate-config"}, {"scenario", rbgk::scenario_name(cfg.scenario)}};
      std::cout << j.dump() << '\n';
      if (common.verbose) std::cerr << rbgk::serialize_config(cfg);
      return 0;
    }
    if (*plot) {
      if (!common.snapshot.empty()) {
        const rbgk::LoadedSnapshot snap = rbgk::load_snapshot(common.snapshot);
        const std::filesystem::path dir = common.out.empty() ? std::filesystem::path("plot") : std::filesystem::path(common.out);
        return finish("emit-plot-data", rbgk::emit_plot_data(snap.model, snap.state, dir));
      }
      const rbgk::RunConfig cfg = rbgk::parse_config(common.config_path());
      const rbgk::Model model = rbgk::build_model(cfg, rbgk::resolve_thread_count(common.threads, cfg.threads));
      const rbgk::SimState state = rbgk::build_initial_state(cfg, model);
      const std::filesystem::path dir = common.out.empty() ? std::filesystem::path(cfg.output_directory) : std::filesystem::path(common.out);
      return finish("emit-plot-data", rbgk::emit_plot_data(model, state, dir));
    }
    const rbgk::RunConfig cfg = rbgk::parse_config(common.config_path());
    if (*run) return finish("run", rbgk::run_scenario(cfg, common.options()));
    if (*probe) return finish("probe-newtonian", rbgk::run_newtonian_probe(cfg, common.options()));
    if (*indiff) return finish("check-indifferentiability", rbgk::run_indifferentiability(cfg, common.options()));
  } catch (const rbgk::Error& e) {
    return report_error(e.category(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorCategory::internal, e.what());
  }
  return report_error(ErrorCategory::usage, "no subcommand");
}
