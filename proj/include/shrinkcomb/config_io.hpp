// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "shrinkcomb/harness.hpp"

namespace shrinkcomb {

// Parses a run configuration from a JSON document. Scenario keys live under
// "scenario" and mirror the ScenarioConfig field names in snake_case; sweep,
// trial count, method list and solver options sit beside it.
RunConfig load_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);

}  // namespace shrinkcomb
