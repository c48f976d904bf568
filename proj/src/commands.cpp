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

#include "dephase/commands.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dephase/core.hpp"
#include "dephase/oracle.hpp"

namespace dephase::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

char separator(const ScenarioConfig& config) {
  return config.format == "tsv" ? '\t' : ',';
}

void emit_preamble(std::ostringstream& out, const ScenarioConfig& config,
                   const char* command) {
  out << "# command: " << command << '\n';
  out << "# config: " << config.canonical << '\n';
}

const SystemSpec& require_system(const ScenarioConfig& config,
                                 const char* command) {
  if (!config.system) {
    throw ConfigError(std::string(command) +
                      " needs a \"system\" block in the config");
  }
  return *config.system;
}

// The bath a matrix-evolution command runs on: the discrete modes as given,
// or the spectral function discretized per the config's discretization block.
DiscreteBath effective_bath(const ScenarioConfig& config,
                            const char* command) {
  if (config.discrete_bath) {
    return *config.discrete_bath;
  }
  if (!config.discretization) {
    throw ConfigError(std::string(command) +
                      " on a spectral bath needs a \"discretization\" block");
  }
  return discretize_spectral(*config.spectral, config.discretization->modes,
                             config.discretization->omega_max);
}

}  // namespace

GammaOutcome cmd_gamma(const ScenarioConfig& config) {
  const char sep = separator(config);
  std::ostringstream out;
  emit_preamble(out, config, "gamma");
  out << 't' << sep << "gamma" << sep << "source" << sep << "quad_error"
      << '\n';

  std::size_t nonconverged = 0;
  if (config.discrete_bath) {
    for (double t : config.times) {
      const double g = gamma_discrete(*config.discrete_bath,
                                      config.temperature, t);
      out << fmt(t) << sep << fmt(g) << sep << "discrete" << sep << fmt(0.0)
          << '\n';
    }
  } else {
    for (double t : config.times) {
      try {
        const IntegralResult r = gamma_continuum(
            *config.spectral, config.temperature, t, config.tolerance);
        out << fmt(t) << sep << fmt(r.value) << sep << "continuum" << sep
            << fmt(r.error) << '\n';
      } catch (const QuadratureNonconvergence& e) {
        ++nonconverged;
        out << fmt(t) << sep << fmt(e.achieved_value()) << sep
            << "continuum_nonconverged" << sep << fmt(e.achieved_error())
            << '\n';
      }
    }
  }
  return GammaOutcome{out.str(), nonconverged};
}

std::string cmd_rho(const ScenarioConfig& config) {
  const SystemSpec& system = require_system(config, "rho");
  const DiscreteBath bath = effective_bath(config, "rho");
  const char sep = separator(config);

  std::ostringstream out;
  emit_preamble(out, config, "rho");
  out << 't' << sep << 'm' << sep << 'n' << sep << "re" << sep << "im" << sep
      << "abs" << '\n';
  for (double t : config.times) {
    const DensityMatrix rho = reduced_density_matrix(
        system, bath, config.temperature, t, config.renormalize);
    for (Eigen::Index m = 0; m < rho.dim(); ++m) {
      for (Eigen::Index n = 0; n < rho.dim(); ++n) {
        const Complex v = rho(m, n);
        out << fmt(t) << sep << m << sep << n << sep << fmt(v.real()) << sep
            << fmt(v.imag()) << sep << fmt(std::abs(v)) << '\n';
      }
    }
  }
  return out.str();
}

OracleCompareOutcome cmd_oracle_compare(const ScenarioConfig& config) {
  const SystemSpec& system = require_system(config, "oracle-compare");
  if (!config.discrete_bath) {
    throw ConfigError("oracle-compare needs a discrete \"bath.modes\" list");
  }
  const DiscreteBath& bath = *config.discrete_bath;
  const double t_max = config.times.back();

  const oracle::TruncationResult conv = oracle::converge_truncation(
      system, bath, config.temperature, t_max, config.tolerance / 10.0,
      config.budget, config.renormalize);
  const oracle::HermitianOperator h = oracle::build_total_hamiltonian(
      system, bath, conv.spec, config.renormalize);
  const oracle::Propagator prop(h, system, bath, config.temperature,
                                conv.spec);

  const char sep = separator(config);
  std::ostringstream out;
  emit_preamble(out, config, "oracle-compare");
  out << "# truncation levels per mode:";
  for (int n : conv.spec.levels_per_mode) {
    out << ' ' << n;
  }
  out << '\n';
  out << "# truncation delta at t_max: " << fmt(conv.achieved_delta) << '\n';
  out << 't' << sep << "max_abs_diff" << sep << "tolerance" << sep << "status"
      << '\n';

  bool pass = true;
  for (double t : config.times) {
    const DensityMatrix closed = reduced_density_matrix(
        system, bath, config.temperature, t, config.renormalize);
    const DensityMatrix brute = prop.reduced_at(t);
    const double diff =
        (closed.entries() - brute.entries()).cwiseAbs().maxCoeff();
    const bool row_pass = diff < config.tolerance;
    pass = pass && row_pass;
    out << fmt(t) << sep << fmt(diff) << sep << fmt(config.tolerance) << sep
        << (row_pass ? "pass" : "fail") << '\n';
  }
  return OracleCompareOutcome{out.str(), pass};
}

std::string cmd_regimes(const ScenarioConfig& config) {
  if (!config.spectral) {
    throw ConfigError("regimes needs a \"bath.spectral\" block");
  }
  if (config.temperature.is_infinite()) {
    throw RegimeUndefined(
        "regime report needs finite beta; at zero temperature only the "
        "quantum scale exists");
  }
  const SpectralFunction& spec = *config.spectral;
  const Temperature& beta = config.temperature;
  const Regime probe = regime(0.0, beta, spec);
  const std::string separation_note =
      probe.weakly_separated ? "weakly separated scales" : "ok";

  const char sep = separator(config);
  std::ostringstream out;
  emit_preamble(out, config, "regimes");
  out << "regime" << sep << "model" << sep << "t_lo" << sep << "t_hi" << sep
      << "n_points" << sep << "value" << sep << "residual" << sep << "note"
      << '\n';

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto emit_row = [&](const std::string& name, const std::string& model,
                            double lo, double hi, std::size_t points,
                            double value, double residual,
                            const std::string& note) {
    out << name << sep << model << sep << fmt(lo) << sep << fmt(hi) << sep
        << points << sep << fmt(value) << sep << fmt(residual) << sep << note
        << '\n';
  };

  {
    const TimeWindow window{1e-3 / spec.cutoff, 1e-2 / spec.cutoff};
    const std::vector<double> times = log_grid(window.lo, window.hi, 17);
    const DecoherenceCurve curve =
        sample_gamma_continuum(spec, beta, times, config.tolerance);
    const FitResult fit =
        fit_asymptotic_exponent(curve, window, FitModel::PowerLaw);
    emit_row("quiet", "power_law", window.lo, window.hi, times.size(),
             fit.slope, fit.residual, separation_note);
  }

  {
    const TimeWindow window{10.0 / spec.cutoff, 0.1 * beta.beta()};
    if (window.lo < window.hi) {
      const std::vector<double> times = log_grid(window.lo, window.hi, 33);
      const DecoherenceCurve curve =
          sample_gamma_continuum(spec, beta, times, config.tolerance);
      const FitResult fit =
          fit_asymptotic_exponent(curve, window, FitModel::LogLaw);
      emit_row("quantum", "log_law", window.lo, window.hi, times.size(),
               fit.slope, fit.residual, separation_note);
    } else {
      emit_row("quantum", "log_law", window.lo, window.hi, 0, nan, nan,
               "window empty; scales too close");
    }
  }

  {
    const ThermalFit thermal =
        fit_thermal_exponent(spec, beta, config.tolerance);
    emit_row("thermal", "power_law", thermal.window.lo, thermal.window.hi, 33,
             thermal.fit.slope, thermal.fit.residual,
             thermal.stabilized ? "stabilized" : "window cap reached");
  }

  if (spec.exponent >= 2.0) {
    const double b = beta.beta();
    const double g10 =
        gamma_continuum(spec, beta, 10.0 * b, config.tolerance).value;
    const double g100 =
        gamma_continuum(spec, beta, 100.0 * b, config.tolerance).value;
    emit_row("saturation", "relative_growth", 10.0 * b, 100.0 * b, 2,
             (g100 - g10) / g10, nan, "gamma saturates");
  }

  emit_row("overall", "decoherence_complete", nan, nan, 0,
           decoherence_complete(spec) ? 1.0 : 0.0, nan,
           decoherence_complete(spec)
               ? "all distinct-pointer coherences decay to zero"
               : "decoherence incomplete; gamma stays bounded");
  return out.str();
}

void deliver_output(const ScenarioConfig& config,
                    const std::optional<std::string>& override_path,
                    const std::string& text) {
  std::optional<std::string> path = override_path;
  if (!path) {
    path = config.output_path;
  }
  if (!path) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot open output file: " + *path);
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    throw ConfigError("failed while writing output file: " + *path);
  }
}

}  // namespace dephase::cli
