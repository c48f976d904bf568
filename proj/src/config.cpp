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

#include "dephase/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace dephase {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(where + " is missing required field \"" + key + "\"");
  }
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ConfigError(where + " must be a number");
  }
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ConfigError(where + " must be a positive integer");
  }
  return static_cast<std::size_t>(j.get<long long>());
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw ConfigError(where + " must be a string");
  }
  return j.get<std::string>();
}

// A complex entry is either a plain number (imaginary part zero) or an
// object {"re": x, "im": y}.
Complex as_complex(const json& j, const std::string& where) {
  if (j.is_number()) {
    return Complex(j.get<double>(), 0.0);
  }
  if (j.is_object()) {
    return Complex(as_number(require(j, "re", where), where + ".re"),
                   as_number(require(j, "im", where), where + ".im"));
  }
  throw ConfigError(where + " must be a number or a {re, im} object");
}

Eigen::VectorXd as_real_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + " must be a nonempty array of numbers");
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        as_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXcd as_complex_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + " must be a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  Eigen::MatrixXcd m(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != rows) {
      throw ConfigError(row_where + " must be an array of length " +
                        std::to_string(rows));
    }
    for (std::size_t c = 0; c < rows; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_complex(j[r][c], row_where + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Temperature parse_temperature(const json& j) {
  const json& beta = require(j, "beta", "temperature");
  if (beta.is_string()) {
    if (beta.get<std::string>() == "inf") {
      return Temperature::infinite();
    }
    throw ConfigError("temperature.beta accepts a number or \"inf\"");
  }
  return Temperature(as_number(beta, "temperature.beta"));
}

std::vector<double> parse_time_grid(const json& j) {
  const double start = as_number(require(j, "start", "time_grid"),
                                 "time_grid.start");
  const double stop =
      as_number(require(j, "stop", "time_grid"), "time_grid.stop");
  const std::size_t count =
      as_count(require(j, "count", "time_grid"), "time_grid.count");
  std::string spacing = "linear";
  if (j.contains("spacing")) {
    spacing = as_string(j["spacing"], "time_grid.spacing");
  }
  if (!(start <= stop)) {
    throw ConfigError("time_grid.start must be <= time_grid.stop");
  }
  std::vector<double> times;
  if (spacing == "linear") {
    times = linear_grid(start, stop, count);
  } else if (spacing == "log") {
    if (!(start > 0.0)) {
      throw ConfigError("time_grid.start must be > 0 for log spacing");
    }
    times = log_grid(start, stop, count);
  } else {
    throw ConfigError("time_grid.spacing must be \"linear\" or \"log\"");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ConfigError("time_grid must be strictly increasing");
    }
  }
  return times;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("top-level config must be a JSON object");
  }
  ScenarioConfig cfg;

  if (j.contains("system")) {
    const json& sys = j["system"];
    Eigen::VectorXd energies =
        as_real_vector(require(sys, "energies", "system"), "system.energies");
    Eigen::VectorXd pointer_values =
        as_real_vector(require(sys, "pointer_values", "system"),
                       "system.pointer_values");
    Eigen::MatrixXcd rho0 =
        as_complex_matrix(require(sys, "rho0", "system"), "system.rho0");
    cfg.system = validate_system(std::move(energies), std::move(pointer_values),
                                 std::move(rho0));
  }

  const json& bath = require(j, "bath", "config");
  const bool has_modes = bath.contains("modes");
  const bool has_spectral = bath.contains("spectral");
  if (has_modes == has_spectral) {
    throw ConfigError(
        "bath must contain exactly one of \"modes\" or \"spectral\"");
  }
  if (has_modes) {
    const json& modes = bath["modes"];
    if (!modes.is_array()) {
      throw ConfigError("bath.modes must be an array");
    }
    DiscreteBath discrete;
    discrete.modes.reserve(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const std::string where = "bath.modes[" + std::to_string(k) + "]";
      const double omega =
          as_number(require(modes[k], "omega", where), where + ".omega");
      const Complex g = as_complex(require(modes[k], "g", where), where + ".g");
      discrete.modes.emplace_back(omega, g);
    }
    cfg.discrete_bath = std::move(discrete);
  } else {
    const json& sp = bath["spectral"];
    cfg.spectral = SpectralFunction(
        as_number(require(sp, "amplitude", "bath.spectral"),
                  "bath.spectral.amplitude"),
        as_number(require(sp, "exponent", "bath.spectral"),
                  "bath.spectral.exponent"),
        as_number(require(sp, "cutoff", "bath.spectral"),
                  "bath.spectral.cutoff"));
  }

  if (j.contains("discretization")) {
    const json& disc = j["discretization"];
    cfg.discretization = DiscretizationSpec{
        as_count(require(disc, "modes", "discretization"),
                 "discretization.modes"),
        as_number(require(disc, "omega_max", "discretization"),
                  "discretization.omega_max")};
    if (!(cfg.discretization->omega_max > 0.0)) {
      throw ConfigError("discretization.omega_max must be > 0");
    }
  }

  cfg.temperature = parse_temperature(require(j, "temperature", "config"));
  cfg.times = parse_time_grid(require(j, "time_grid", "config"));

  if (j.contains("flags")) {
    const json& flags = j["flags"];
    if (!flags.is_object()) {
      throw ConfigError("flags must be an object");
    }
    if (flags.contains("renormalize")) {
      if (!flags["renormalize"].is_boolean()) {
        throw ConfigError("flags.renormalize must be a boolean");
      }
      cfg.renormalize = flags["renormalize"].get<bool>();
    }
    if (flags.contains("tolerance")) {
      cfg.tolerance = as_number(flags["tolerance"], "flags.tolerance");
      if (!(cfg.tolerance > 0.0)) {
        throw ConfigError("flags.tolerance must be > 0");
      }
    }
    if (flags.contains("budget")) {
      cfg.budget = as_count(flags["budget"], "flags.budget");
    }
  }

  if (j.contains("output")) {
    const json& output = j["output"];
    if (!output.is_object()) {
      throw ConfigError("output must be an object");
    }
    if (output.contains("path")) {
      cfg.output_path = as_string(output["path"], "output.path");
    }
    if (output.contains("format")) {
      cfg.format = as_string(output["format"], "output.format");
    }
  }
  if (cfg.format != "csv" && cfg.format != "tsv") {
    throw ConfigError("output.format must be \"csv\" or \"tsv\"");
  }

  cfg.canonical = j.dump();
  return cfg;
}

nlohmann::json parse_json_text(const std::string& text,
                               const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("failed to parse " + origin + ": " + e.what());
  }
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(parse_json_text(buffer.str(), path));
}

}  // namespace dephase
