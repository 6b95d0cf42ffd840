#pragma once

#include <string>
#include <vector>

#include "holocycle/scenario.hpp"

namespace holocycle {

/// One quantitative gate; the comparison direction is baked in by the
/// pipeline that produced the row, `passed` is the verdict of that gate.
struct CheckRow {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::string note;
};

/// Plot-ready data series, written as <scenario>/<filename> by write_outputs.
struct Artifact {
  std::string filename;
  std::string content;
};

/// Everything one scenario produced.  `observed` uses the same vocabulary as
/// ScenarioConfig::expect plus "fail" (checks missed without a structural
/// finding) and "error" (exception).  The verdict is "pass" when the outcome
/// matches the declared expectation and every enabled check held, "degraded"
/// when a degrade was both expected and seen, otherwise "fail".
struct ScenarioRun {
  std::string name;
  std::string title;
  std::string pipeline;
  std::string expect;
  std::string observed = "error";
  std::string verdict = "fail";
  bool ok = false;
  double elapsed_seconds = 0.0;
  double budget_seconds = 120.0;
  std::string error;
  std::vector<CheckRow> checks;
  Json scenario_echo;
  Json domination = Json::object();   // growth rate and margins per cocycle
  Json results = Json::object();      // pipeline-specific measured quantities
  Json diagnostics = Json::object();  // increment histories, residual tables
  std::vector<Artifact> artifacts;
};

ScenarioRun run_scenario(const ScenarioConfig& cfg, int max_workers);

/// Deterministic apart from the "meta" block (timestamps, timings, workers).
Json make_report(const std::vector<ScenarioRun>& runs, int max_workers);

/// report.json at the top level plus one directory of CSV series per scenario.
void write_outputs(const std::vector<ScenarioRun>& runs, const Json& report,
                   const std::string& output_dir);

}  // namespace holocycle
