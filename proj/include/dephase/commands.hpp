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

#include "dephase/config.hpp"

namespace dephase::cli {

// Each command renders its complete output (comment lines echoing the
// canonical config, a header row, data rows; LF line endings; numbers at 17
// significant digits) and returns it as one string, so callers can write it
// atomically or compare runs byte for byte.

struct GammaOutcome {
  std::string report;
  std::size_t nonconverged_rows;
};

// Columns: t, gamma, source, quad_error. A row whose quadrature misses the
// tolerance still appears, carrying the achieved estimate and the source tag
// "continuum_nonconverged"; the count of such rows is returned so the caller
// can fail the run after delivering the full report.
GammaOutcome cmd_gamma(const ScenarioConfig& config);

// Columns: t, m, n, re, im, abs; all d^2 elements per time point.
std::string cmd_rho(const ScenarioConfig& config);

struct OracleCompareOutcome {
  std::string report;
  bool pass;
};

// Columns: t, max_abs_diff, tolerance, status. Truncation is converged to
// tolerance/10 so the closed-form comparison at `tolerance` is meaningful.
OracleCompareOutcome cmd_oracle_compare(const ScenarioConfig& config);

// Columns: regime, model, t_lo, t_hi, n_points, value, residual, note.
// One row per fitted window plus a saturation row (exponent >= 2) and a
// final completeness verdict row.
std::string cmd_regimes(const ScenarioConfig& config);

// Atomically write `text` to the destination: explicit override path if
// given, else the config's output.path, else stdout.
void deliver_output(const ScenarioConfig& config,
                    const std::optional<std::string>& override_path,
                    const std::string& text);

}  // namespace dephase::cli
