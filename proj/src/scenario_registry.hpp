#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cqed/scenario.hpp"

namespace cqed::detail {

struct ScenarioEntry {
  std::string name;
  std::string description;
  Process default_process = Process::PDC;
  Truncation default_truncation;
  bool truncation_dependent = true;
  bool single_mode = false;
  std::vector<std::string> option_keys;
  std::function<ScenarioResult(const ScenarioConfig&, const Truncation&)> run;
};

const std::vector<ScenarioEntry>& registry();
const ScenarioEntry& find_scenario(const std::string& name);

}  // namespace cqed::detail
