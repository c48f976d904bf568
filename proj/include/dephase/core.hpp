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

#include "dephase/types.hpp"

namespace dephase {

// Bath-free unitary evolution in the preferred basis:
//   rho_mn(t) = rho_mn(0) * exp(i (E_n - E_m) t).
// Negative t is allowed here (unitary reversal); everywhere a bath is
// involved, t must be >= 0.
DensityMatrix free_evolution(const SystemSpec& system, double t);

// Per-mode exponent P_mn for one bath mode:
//   P = 2 (lambda_m - lambda_n)^2 sin^2(omega t / 2) coth(beta omega / 2)
//       + i (lambda_m^2 - lambda_n^2) (sin(omega t) - omega t).
// With the renormalization counter-term in the Hamiltonian the imaginary
// part becomes (lambda_m^2 - lambda_n^2) sin(omega t); the real part (and
// hence every magnitude downstream) is unchanged.
Complex p_factor(double lambda_m, double lambda_n, const BathMode& mode,
                 const Temperature& beta, double t, bool renormalize);

// Per-mode decoherence factor S_mn = exp(-|g|^2 / omega^2 * P_mn).
// |S| <= 1 always; S = 1 iff lambda_m == lambda_n, g == 0, or
// sin(omega t / 2) == 0. If the real part of the exponent is below the
// double-precision exp underflow threshold (-745), returns exactly 0.
Complex s_factor(double lambda_m, double lambda_n, const BathMode& mode,
                 const Temperature& beta, double t, bool renormalize);

// Exact reduced density matrix at time t >= 0:
//   rho_mn(t) = rho_mn(0) * exp(i (E_n - E_m) t) * prod_k S_mn,k.
// Hermiticity and unit trace hold by construction and are asserted on the
// returned value, along with positive semidefiniteness.
DensityMatrix reduced_density_matrix(const SystemSpec& system,
                                     const DiscreteBath& bath,
                                     const Temperature& beta, double t,
                                     bool renormalize = false);

// Decoherence function of a discrete bath:
//   Gamma(t) = 8 sum_k |g_k|^2 / omega_k^2 sin^2(omega_k t / 2)
//              coth(beta omega_k / 2).
// Nonnegative, exactly 0 at t = 0. Off-diagonal magnitudes obey
//   |rho_mn(t)| = |rho_mn(0)| exp(-1/4 (lambda_m - lambda_n)^2 Gamma(t)).
double gamma_discrete(const DiscreteBath& bath, const Temperature& beta,
                      double t);

}  // namespace dephase
