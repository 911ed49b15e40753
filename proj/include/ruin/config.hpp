#pragma once
// Sectioned key-value scenario files and the two built-in presets.  Presets
// are stored as config text and go through the same parser as user files.

#include <string>
#include <vector>

#include "ruin/scenario.hpp"

namespace ruin {

struct ParsedScenario {
  Scenario scenario;
  RunOptions run;
};

// Parse errors and validation failures throw ConfigError; messages carry
// "<name>:<line>:" where a specific line is at fault.
ParsedScenario parse_scenario_text(const std::string& text, const std::string& name);
ParsedScenario parse_scenario_file(const std::string& path);

const std::vector<std::string>& preset_names();
std::string preset_text(const std::string& name);      // throws on unknown names
ParsedScenario load_preset(const std::string& name);

// "logspace:lo:hi:count" or a comma-separated list; values must be positive
// and increasing
std::vector<double> parse_x_grid(const std::string& spec);

}  // namespace ruin
