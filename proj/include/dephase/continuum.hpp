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
#include <vector>

#include "dephase/types.hpp"

namespace dephase {

// Continuum bath description: frequency weight A * omega^n * exp(-omega/omega_c).
// amplitude A > 0, exponent n > 0, cutoff omega_c > 0. n < 1 is sub-ohmic,
// n = 1 ohmic, n > 1 super-ohmic.
struct SpectralFunction {
  SpectralFunction(double amplitude_in, double exponent_in, double cutoff_in);

  double amplitude;
  double exponent;
  double cutoff;
};

// A * omega^n * exp(-omega/omega_c) for omega > 0.
double spectral_weight(double omega, const SpectralFunction& spec);

// Integrand of the continuum decoherence function at frequency omega > 0:
//   8 A omega^(n-2) exp(-omega/omega_c) sin^2(omega t / 2) coth(beta omega / 2).
// Finite and continuous down to omega -> 0+ for n > 0 (the coth evaluation
// switches to a series for small beta*omega; see Temperature::coth_half).
double gamma_integrand(const SpectralFunction& spec, const Temperature& beta,
                       double t, double omega);

struct IntegralResult {
  double value;
  double error;
};

// Decoherence function of the continuum bath:
//   Gamma(t) = 8 * integral_0^inf A omega^(n-2) exp(-omega/omega_c)
//              sin^2(omega t / 2) coth(beta omega / 2) domega,
// normalized so that it is the K -> infinity limit of gamma_discrete over
// discretize_spectral. Adaptive Gauss-Kronrod quadrature with
// oscillation-resolving panels; for very large t the high-frequency range is
// integrated in averaged form with an explicit boundary correction, so cost
// stays bounded in t. The returned error is a conservative absolute estimate;
// it satisfies error <= tol * value on success.
// Throws QuadratureNonconvergence (with the achieved estimate attached) if
// the tolerance cannot be met within the panel budget.
IntegralResult gamma_continuum(const SpectralFunction& spec,
                               const Temperature& beta, double t, double tol);

enum class RegimeKind { Quiet, Quantum, Thermal };

// Classification of a time point against the two scales 1/omega_c and beta.
// Half-open conventions: Quiet for t < 1/omega_c, Quantum for
// 1/omega_c <= t < beta, Thermal for t >= beta. `separation` = beta * omega_c
// measures how far apart the scales are; below 100 the regime structure is
// weakly separated and asymptotic fits are unreliable.
struct Regime {
  RegimeKind kind;
  double inverse_cutoff;
  double beta;
  double separation;
  bool weakly_separated;
};

Regime regime(double t, const Temperature& beta, const SpectralFunction& spec);

enum class CurveSource { Discrete, Continuum };

// Sampled Gamma(t) on a time grid. quad_errors holds per-point quadrature
// error estimates (all zero for discrete sums, which are exact).
struct DecoherenceCurve {
  std::vector<double> times;
  std::vector<double> values;
  CurveSource source;
  std::vector<double> quad_errors;
};

DecoherenceCurve sample_gamma_discrete(const DiscreteBath& bath,
                                       const Temperature& beta,
                                       const std::vector<double>& times);

DecoherenceCurve sample_gamma_continuum(const SpectralFunction& spec,
                                        const Temperature& beta,
                                        const std::vector<double>& times,
                                        double tol);

// count points from lo to hi inclusive, linearly or geometrically spaced.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

enum class FitModel { PowerLaw, LogLaw };

struct TimeWindow {
  double lo;
  double hi;
};

// slope: PowerLaw fits log Gamma vs log t (the asymptotic power); LogLaw fits
// Gamma vs ln t (slope of logarithmic growth). residual is the fit RMS
// deviation normalized by the data range in the fitted coordinates.
struct FitResult {
  double slope;
  double residual;
};

// Least-squares slope over the curve samples with window.lo <= t <= window.hi
// (t > 0 only). Requires >= 8 usable points (InsufficientSamples); PowerLaw
// additionally requires Gamma > 0 throughout the window (NonpositiveGamma).
FitResult fit_asymptotic_exponent(const DecoherenceCurve& curve,
                                  const TimeWindow& window, FitModel model);

// True iff every off-diagonal element with distinct pointer values decays to
// zero, i.e. Gamma(t) diverges: exponent n < 2 strictly.
bool decoherence_complete(const SpectralFunction& spec);

// Midpoint discretization: K modes on [0, omega_max], omega_k = (k+1/2) domega,
// |g_k|^2 = spectral_weight(omega_k) * domega with g_k real >= 0 (phases do
// not affect any observable here). gamma_discrete of the result converges to
// gamma_continuum as K and omega_max grow.
DiscreteBath discretize_spectral(const SpectralFunction& spec, std::size_t K,
                                 double omega_max);

// Late-time power-law fit with an automatic window: fits on [T, 100T] for
// T = 10 beta, escalating T tenfold until two successive fits agree within
// 0.01 (the asymptote can emerge many decades past beta, especially for
// super-ohmic spectra whose quantum-regime contribution saturates to a large
// constant). `stabilized` = false means the cap T = 1e12 beta was reached
// first; the last fit is still returned.
struct ThermalFit {
  FitResult fit;
  TimeWindow window;
  bool stabilized;
  int escalations;
};

ThermalFit fit_thermal_exponent(const SpectralFunction& spec,
                                const Temperature& beta, double quad_tol);

}  // namespace dephase
