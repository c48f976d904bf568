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

#include "dephase/core.hpp"

#include <cmath>
#include <vector>

namespace dephase {

namespace {

// exp(x) underflows to 0 for x < ~-745.1; below that the factor is an
// exact zero rather than a subnormal-contaminated residue.
constexpr double kExpUnderflow = -745.0;

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) {
    throw NegativeTime("time must be >= 0 for bath-coupled evolution, got " +
                       std::to_string(t));
  }
}

}  // namespace

DensityMatrix free_evolution(const SystemSpec& system, double t) {
  if (!std::isfinite(t)) {
    throw NegativeTime("time must be finite");
  }
  const auto d = system.dim();
  const Eigen::VectorXd& E = system.energies();
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      const Complex phase = std::exp(Complex(0.0, (E(n) - E(m)) * t));
      out(m, n) = system.rho0()(m, n) * phase;
    }
  }
  return DensityMatrix::checked(out);
}

Complex p_factor(double lambda_m, double lambda_n, const BathMode& mode,
                 const Temperature& beta, double t, bool renormalize) {
  require_nonnegative_time(t);
  const double dl = lambda_m - lambda_n;
  const double ds = lambda_m * lambda_m - lambda_n * lambda_n;
  const double w = mode.omega;
  const double s = std::sin(0.5 * w * t);
  const double re = 2.0 * dl * dl * s * s * beta.coth_half(w);
  const double im =
      renormalize ? ds * std::sin(w * t) : ds * (std::sin(w * t) - w * t);
  return Complex(re, im);
}

Complex s_factor(double lambda_m, double lambda_n, const BathMode& mode,
                 const Temperature& beta, double t, bool renormalize) {
  const Complex p = p_factor(lambda_m, lambda_n, mode, beta, t, renormalize);
  const double coupling = std::norm(mode.g) / (mode.omega * mode.omega);
  const Complex exponent = -coupling * p;
  if (exponent.real() < kExpUnderflow) {
    return Complex(0.0, 0.0);
  }
  return std::exp(exponent);
}

DensityMatrix reduced_density_matrix(const SystemSpec& system,
                                     const DiscreteBath& bath,
                                     const Temperature& beta, double t,
                                     bool renormalize) {
  require_nonnegative_time(t);
  const auto d = system.dim();
  const Eigen::VectorXd& E = system.energies();
  const Eigen::VectorXd& lam = system.pointer_values();
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    out(m, m) = system.rho0()(m, m);
    for (Eigen::Index n = m + 1; n < d; ++n) {
      Complex factor = std::exp(Complex(0.0, (E(n) - E(m)) * t));
      for (const BathMode& mode : bath.modes) {
        factor *= s_factor(lam(m), lam(n), mode, beta, t, renormalize);
      }
      out(m, n) = system.rho0()(m, n) * factor;
      out(n, m) = std::conj(out(m, n));
    }
  }
  return DensityMatrix::checked(out);
}

double gamma_discrete(const DiscreteBath& bath, const Temperature& beta,
                      double t) {
  require_nonnegative_time(t);
  std::vector<double> terms;
  terms.reserve(bath.size());
  for (const BathMode& mode : bath.modes) {
    const double w = mode.omega;
    const double s = std::sin(0.5 * w * t);
    terms.push_back(8.0 * std::norm(mode.g) / (w * w) * s * s *
                    beta.coth_half(w));
  }
  return pairwise_sum(terms);
}

}  // namespace dephase
