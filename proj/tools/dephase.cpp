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

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "dephase/commands.hpp"
#include "dephase/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitComparisonFailed = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> output_path;
  std::optional<double> tolerance;
  std::optional<bool> renormalize;
  std::optional<std::size_t> budget;
  std::optional<std::string> format;
};

void attach_common(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("-c,--config", opts->config_path, "scenario JSON file")
      ->required();
  cmd->add_option("-o,--output", opts->output_path,
                  "output file (defaults to the config's output.path, else "
                  "stdout)");
  cmd->add_option("--tolerance", opts->tolerance,
                  "override flags.tolerance from the config");
  cmd->add_flag("--renormalize,!--no-renormalize", opts->renormalize,
                "override flags.renormalize from the config");
  cmd->add_option("--budget", opts->budget,
                  "override flags.budget (oracle dimension cap)");
  cmd->add_option("--format", opts->format, "csv or tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));
}

// CLI overrides are folded into the JSON document before parsing, so the
// canonical config echoed into the output reflects what actually ran.
dephase::ScenarioConfig load_with_overrides(const CommonOptions& opts) {
  std::ifstream in(opts.config_path, std::ios::binary);
  if (!in) {
    throw dephase::ConfigError("cannot open config file: " + opts.config_path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j =
      dephase::parse_json_text(buffer.str(), opts.config_path);
  if (opts.tolerance) {
    j["flags"]["tolerance"] = *opts.tolerance;
  }
  if (opts.renormalize) {
    j["flags"]["renormalize"] = *opts.renormalize;
  }
  if (opts.budget) {
    j["flags"]["budget"] = *opts.budget;
  }
  if (opts.format) {
    j["output"]["format"] = *opts.format;
  }
  return dephase::parse_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact dephasing dynamics of a small system in a bosonic bath"};
  app.require_subcommand(1);

  CommonOptions gamma_opts;
  CLI::App* gamma = app.add_subcommand(
      "gamma", "decoherence function Gamma(t) on a time grid");
  attach_common(gamma, &gamma_opts);

  CommonOptions rho_opts;
  CLI::App* rho = app.add_subcommand(
      "rho", "reduced density matrix time series");
  attach_common(rho, &rho_opts);

  CommonOptions oracle_opts;
  CLI::App* oracle_compare = app.add_subcommand(
      "oracle-compare",
      "closed form vs brute-force truncated-Fock evolution");
  attach_common(oracle_compare, &oracle_opts);

  CommonOptions regimes_opts;
  CLI::App* regimes = app.add_subcommand(
      "regimes", "asymptotic regime and exponent report");
  attach_common(regimes, &regimes_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gamma->parsed()) {
      const dephase::ScenarioConfig cfg = load_with_overrides(gamma_opts);
      const dephase::cli::GammaOutcome outcome = dephase::cli::cmd_gamma(cfg);
      dephase::cli::deliver_output(cfg, gamma_opts.output_path,
                                   outcome.report);
      if (outcome.nonconverged_rows > 0) {
        std::cerr << "dephase: " << outcome.nonconverged_rows
                  << " time point(s) did not reach the quadrature tolerance"
                  << std::endl;
        return kExitNumerical;
      }
      return kExitOk;
    }
    if (rho->parsed()) {
      const dephase::ScenarioConfig cfg = load_with_overrides(rho_opts);
      dephase::cli::deliver_output(cfg, rho_opts.output_path,
                                   dephase::cli::cmd_rho(cfg));
      return kExitOk;
    }
    if (oracle_compare->parsed()) {
      const dephase::ScenarioConfig cfg = load_with_overrides(oracle_opts);
      const dephase::cli::OracleCompareOutcome outcome =
          dephase::cli::cmd_oracle_compare(cfg);
      dephase::cli::deliver_output(cfg, oracle_opts.output_path,
                                   outcome.report);
      if (!outcome.pass) {
        std::cerr << "dephase: closed form and oracle disagree beyond "
                     "tolerance"
                  << std::endl;
        return kExitComparisonFailed;
      }
      return kExitOk;
    }
    const dephase::ScenarioConfig cfg = load_with_overrides(regimes_opts);
    dephase::cli::deliver_output(cfg, regimes_opts.output_path,
                                 dephase::cli::cmd_regimes(cfg));
    return kExitOk;
  } catch (const dephase::ValidationError& e) {
    std::cerr << "dephase: invalid input: " << e.what() << std::endl;
    return kExitValidation;
  } catch (const dephase::NumericalError& e) {
    std::cerr << "dephase: numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "dephase: " << e.what() << std::endl;
    return kExitNumerical;
  }
}
