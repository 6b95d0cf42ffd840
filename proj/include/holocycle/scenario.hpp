#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "holocycle/cocycle.hpp"

namespace holocycle {

using Json = nlohmann::json;

/// Declarative description of one experiment: a base system, fiber resolution,
/// one or two generator families, the pipeline to run with its tolerances, and
/// the outcome the scenario is built to demonstrate.
///
/// Top-level config keys: name, title, description, expect, budget_seconds,
/// base, fiber {grid_size, jet_order}, alpha, beta, reference,
/// pipeline (string or {name, ...tolerances/counts}), seed, output.
/// Unknown keys are rejected so typos fail loudly instead of being ignored.
struct ScenarioConfig {
  std::string name;
  std::string title;
  std::string description;
  std::string pipeline;          // holonomy-verify | poc-check | reconstruct |
                                 // rigidity-full | regularity-probe
  std::string expect = "pass";   // pass | obstruction | mismatch |
                                 // witness_failed | degraded
  double budget_seconds = 120.0;
  Json base;       // system description
  Json alpha;      // first generator family
  Json beta;       // optional second generator family (null when absent)
  Json reference;  // optional analytic section the result is compared against
  int grid_size = 2048;
  int jet_order = 3;
  Json params = Json::object();  // pipeline tolerances and sample counts
  long seed = 0;                 // offset into the low-discrepancy point stream
  std::string output;            // preferred output directory (CLI may override)

  static ScenarioConfig from_json(const Json& j);
  Json to_json() const;
};

BaseSystem make_system(const Json& spec);
BasePoint parse_point(const Json& spec, const BaseSystem& sys);
Cocycle make_cocycle(const Json& gen, const BaseSystem& sys, int grid, int jet_order);

/// Pointwise diffeo families used as conjugators and reference sections.
std::function<CircleDiffeo(const BasePoint&)> make_section(const Json& spec,
                                                           const BaseSystem& sys, int grid,
                                                           int jet_order);

/// Sets config[dotted.key] = value, creating objects along the path.  The
/// value string is parsed as JSON when possible, else kept as a raw string.
void apply_override(Json& config, const std::string& dotted_key, const std::string& value);

}  // namespace holocycle
