#pragma once

#include <string>
#include <vector>

#include "holocycle/scenario.hpp"

namespace holocycle {

// Scenarios compiled into the binary so `run <name>` works without any
// files on disk.  Order is stable and names are unique.
const std::vector<ScenarioConfig>& bundled_scenarios();

// Returns nullptr when no bundled scenario has that name.
const ScenarioConfig* find_bundled_scenario(const std::string& name);

}  // namespace holocycle
