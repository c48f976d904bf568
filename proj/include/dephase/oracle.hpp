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
#include <string>
#include <vector>

#include "dephase/types.hpp"

// Brute-force reference implementation: materialize the full system (x) bath
// Hamiltonian on a truncated Fock space, thermalize every mode, evolve by
// exact eigendecomposition, and partial-trace the bath away. Exponentially
// expensive by design; exists to verify the closed-form evolution on small
// instances.
namespace dephase::oracle {

// Fock levels kept per mode (N_k >= 2 each), the max-norm tolerance the
// truncation was converged to, and the cap on the total matrix dimension
// d * prod(N_k).
struct TruncationSpec {
  std::vector<int> levels_per_mode;
  double convergence_tol = 0.0;
  std::size_t dimension_budget = 4096;
};

class HermitianOperator {
 public:
  static constexpr double kHermitianTol = 1e-12;

  static HermitianOperator checked(Eigen::MatrixXcd matrix, std::string label);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  HermitianOperator(Eigen::MatrixXcd matrix, std::string label)
      : matrix_(std::move(matrix)), label_(std::move(label)) {}

  Eigen::MatrixXcd matrix_;
  std::string label_;
};

// Thermal oscillator state on the lowest `levels` Fock states: populations
// proportional to exp(-beta omega j), renormalized to unit trace over the
// kept levels. beta = infinity gives the ground-state projector.
DensityMatrix thermal_mode_state(const BathMode& mode, const Temperature& beta,
                                 int levels);

// H = diag(E) (x) 1 + 1 (x) sum_k omega_k a_k^dag a_k
//       + diag(lambda) (x) sum_k (conj(g_k) a_k + g_k a_k^dag)
//       [+ diag(lambda^2) * sum_k |g_k|^2 / omega_k (x) 1 when renormalize],
// with a the truncated lowering operator (a|j> = sqrt(j) |j-1>). Index order
// is system factor first, then modes in input order.
HermitianOperator build_total_hamiltonian(const SystemSpec& system,
                                          const DiscreteBath& bath,
                                          const TruncationSpec& trunc,
                                          bool renormalize);

// One eigendecomposition of H, reused across time points. The initial state
// is rho0 (x) prod_k thermal_mode_state(mode_k).
class Propagator {
 public:
  Propagator(const HermitianOperator& hamiltonian, const SystemSpec& system,
             const DiscreteBath& bath, const Temperature& beta,
             const TruncationSpec& trunc);

  // exp(-iHt) rho_total(0) exp(iHt), bath modes traced out.
  DensityMatrix reduced_at(double t) const;

  // U(t) = exp(-iHt) in the computational basis, for unitarity checks.
  Eigen::MatrixXcd propagator_at(double t) const;

  Eigen::Index total_dim() const { return eigenvalues_.size(); }

 private:
  Eigen::Index system_dim_;
  Eigen::Index bath_dim_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::MatrixXcd rho0_eigenbasis_;
};

// Single-shot wrapper around Propagator for one time point.
DensityMatrix evolve_and_trace(const HermitianOperator& hamiltonian,
                               const SystemSpec& system,
                               const DiscreteBath& bath,
                               const Temperature& beta,
                               const TruncationSpec& trunc, double t);

struct TruncationResult {
  TruncationSpec spec;
  double achieved_delta;
};

// Grows all N_k together (N -> ceil(3N/2)) until the reduced matrix at t_max
// moves by < tol in max-norm between successive levels. Returns the first
// accepted (coarser) level and the delta that accepted it. The starting level
// is max(4, ceil(4 max_k max_m |lambda_m g_k / omega_k|^2)): the coupling
// displaces each oscillator by lambda g / omega, so the needed Fock depth
// grows with the square of that shift. Throws DimensionBudgetExceeded (with
// the best delta seen) if the budget is hit first.
TruncationResult converge_truncation(const SystemSpec& system,
                                     const DiscreteBath& bath,
                                     const Temperature& beta, double t_max,
                                     double tol,
                                     std::size_t dimension_budget = 4096,
                                     bool renormalize = false);

}  // namespace dephase::oracle
