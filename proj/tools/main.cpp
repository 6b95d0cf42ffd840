// Command line front end: runs scenarios (bundled or from JSON files) and
// writes report.json plus per-scenario CSV series.
//
// Exit codes: 0 every scenario matched its declared expectation, 1 at least
// one verdict was "fail", 2 the configuration was invalid (nothing written).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "holocycle/bundled_scenarios.hpp"
#include "holocycle/errors.hpp"
#include "holocycle/pipelines.hpp"

namespace fs = std::filesystem;
using holocycle::ConfigInvalid;
using holocycle::Json;
using holocycle::ScenarioConfig;

namespace {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw ConfigInvalid("malformed JSON in '" + path + "': " + e.what());
  }
  return doc;
}

// Raw scenario documents named by the `run` argument: a file path, a bundled
// scenario name, or "all" for the whole catalog.
std::vector<Json> resolve_configs(const std::string& arg) {
  std::vector<Json> docs;
  if (arg == "all") {
    for (const auto& sc : holocycle::bundled_scenarios()) docs.push_back(sc.to_json());
    return docs;
  }
  std::error_code ec;
  if (fs::exists(arg, ec)) {
    docs.push_back(load_json_file(arg));
    return docs;
  }
  if (const ScenarioConfig* sc = holocycle::find_bundled_scenario(arg)) {
    docs.push_back(sc->to_json());
    return docs;
  }
  throw ConfigInvalid("'" + arg + "' is neither a config file, a bundled scenario name, nor 'all'");
}

void apply_overrides(Json& doc, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigInvalid("override '" + ov + "' must look like key=value");
    holocycle::apply_override(doc, ov.substr(0, eq), ov.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for circle-map cocycles over hyperbolic base dynamics"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string output_dir;
  std::vector<std::string> overrides;
  int max_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario file, a bundled scenario, or all");
  run_cmd->add_option("config", config_arg, "Config file path, bundled scenario name, or 'all'")
      ->required();
  run_cmd->add_option("--output-dir", output_dir, "Directory for report.json and CSV series");
  run_cmd->add_option("--override", overrides,
                      "Override a config key before validation, e.g. fiber.grid_size=256");
  run_cmd->add_option("--max-workers", max_workers, "Worker threads for per-sample loops")
      ->check(CLI::PositiveNumber);

  CLI::App* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenarios");

  std::string dump_dir;
  CLI::App* dump_cmd =
      app.add_subcommand("dump-scenarios", "Write every bundled scenario to a directory");
  dump_cmd->add_option("dir", dump_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& sc : holocycle::bundled_scenarios())
        std::printf("%-34s %-17s %s\n", sc.name.c_str(), sc.pipeline.c_str(), sc.title.c_str());
      return 0;
    }

    if (dump_cmd->parsed()) {
      fs::create_directories(dump_dir);
      for (const auto& sc : holocycle::bundled_scenarios()) {
        std::ofstream out(fs::path(dump_dir) / (sc.name + ".json"));
        out << sc.to_json().dump(2) << "\n";
      }
      std::printf("wrote %zu scenario files to %s\n", holocycle::bundled_scenarios().size(),
                  dump_dir.c_str());
      return 0;
    }

    // run: validate everything before computing anything so a bad config can
    // never leave partial outputs behind.
    std::vector<ScenarioConfig> configs;
    for (Json& doc : resolve_configs(config_arg)) {
      apply_overrides(doc, overrides);
      configs.push_back(ScenarioConfig::from_json(doc));
    }

    std::string outdir = output_dir;
    if (outdir.empty() && configs.size() == 1 && !configs[0].output.empty())
      outdir = configs[0].output;
    if (outdir.empty()) outdir = "out";

    std::vector<holocycle::ScenarioRun> runs;
    for (const ScenarioConfig& cfg : configs) {
      std::printf("[ run  ] %s (%s)\n", cfg.name.c_str(), cfg.pipeline.c_str());
      std::fflush(stdout);
      runs.push_back(holocycle::run_scenario(cfg, max_workers));
      const auto& r = runs.back();
      std::printf("[ %-4s ] %s: observed %s, expected %s (%.1fs)\n", r.verdict.c_str(),
                  r.name.c_str(), r.observed.c_str(), r.expect.c_str(), r.elapsed_seconds);
      std::fflush(stdout);
    }

    Json report = holocycle::make_report(runs, max_workers);
    holocycle::write_outputs(runs, report, outdir);
    std::printf("report: %s\n", (fs::path(outdir) / "report.json").string().c_str());

    for (const auto& r : runs)
      if (r.verdict == "fail") return 1;
    return 0;
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
