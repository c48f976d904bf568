// Copyright 2026 The dephase authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dephase/continuum.hpp"
#include "dephase/types.hpp"

namespace dephase {

struct DiscretizationSpec {
  std::size_t modes;
  double omega_max;
};

// One fully validated scenario. Exactly one of discrete_bath / spectral is
// set. `times` is the expanded, strictly increasing grid. `canonical` is the
// sorted-key compact JSON the scenario was parsed from (CLI overrides already
// applied), echoed into output files so a run can be reproduced from its
// output alone.
struct ScenarioConfig {
  std::optional<SystemSpec> system;
  std::optional<DiscreteBath> discrete_bath;
  std::optional<SpectralFunction> spectral;
  std::optional<DiscretizationSpec> discretization;
  Temperature temperature = Temperature(1.0);
  std::vector<double> times;
  bool renormalize = false;
  double tolerance = 1e-8;
  std::size_t budget = 4096;
  std::optional<std::string> output_path;
  std::string format = "csv";
  std::string canonical;
};

// Parse and validate a scenario; all diagnostics name the offending field.
// Throws ConfigError for structural problems and the specific validation
// error for domain-rule violations.
ScenarioConfig parse_config(const nlohmann::json& j);

// Read a JSON file and parse it. Parse errors are rethrown as ConfigError.
ScenarioConfig load_config(const std::string& path);

// Parse a JSON string (file contents) into the raw JSON document.
nlohmann::json parse_json_text(const std::string& text,
                               const std::string& origin);

}  // namespace dephase
