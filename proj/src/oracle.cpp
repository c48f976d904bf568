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

#include "dephase/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

namespace dephase::oracle {

namespace {

Eigen::MatrixXcd lowering_operator(int levels) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(levels, levels);
  for (int j = 1; j < levels; ++j) {
    a(j - 1, j) = std::sqrt(static_cast<double>(j));
  }
  return a;
}

void check_truncation(const DiscreteBath& bath, const TruncationSpec& trunc,
                      Eigen::Index system_dim) {
  if (trunc.levels_per_mode.size() != bath.size()) {
    throw DimensionMismatch(
        "truncation lists " + std::to_string(trunc.levels_per_mode.size()) +
        " levels for " + std::to_string(bath.size()) + " bath modes");
  }
  double total = static_cast<double>(system_dim);
  for (int levels : trunc.levels_per_mode) {
    if (levels < 2) {
      throw InvalidArgument("each mode needs at least 2 Fock levels: got " +
                            std::to_string(levels));
    }
    total *= static_cast<double>(levels);
  }
  if (total > static_cast<double>(trunc.dimension_budget)) {
    throw DimensionBudgetExceeded(
        "total dimension " + std::to_string(static_cast<long long>(total)) +
        " exceeds budget " + std::to_string(trunc.dimension_budget));
  }
}

// Operator acting on mode k, identity on every other mode; modes are ordered
// as given, system factor excluded.
Eigen::MatrixXcd embed_in_bath(const Eigen::MatrixXcd& op,
                               const std::vector<int>& levels,
                               std::size_t k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const Eigen::MatrixXcd& factor =
        (j == k) ? op
                 : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(levels[j],
                                                               levels[j]));
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

Eigen::Index bath_dimension(const std::vector<int>& levels) {
  Eigen::Index dim = 1;
  for (int n : levels) {
    dim *= n;
  }
  return dim;
}

}  // namespace

HermitianOperator HermitianOperator::checked(Eigen::MatrixXcd matrix,
                                             std::string label) {
  if (matrix.rows() != matrix.cols()) {
    throw DimensionMismatch("operator \"" + label + "\" is not square");
  }
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= kHermitianTol)) {
    throw NotHermitian("operator \"" + label + "\" deviates from Hermitian by " +
                       std::to_string(asym));
  }
  return HermitianOperator(std::move(matrix), std::move(label));
}

DensityMatrix thermal_mode_state(const BathMode& mode, const Temperature& beta,
                                 int levels) {
  if (levels < 2) {
    throw InvalidArgument("thermal state needs at least 2 Fock levels: got " +
                          std::to_string(levels));
  }
  Eigen::VectorXd populations = Eigen::VectorXd::Zero(levels);
  if (beta.is_infinite()) {
    populations(0) = 1.0;
  } else {
    for (int j = 0; j < levels; ++j) {
      populations(j) = std::exp(-beta.beta() * mode.omega * j);
    }
    populations /= populations.sum();
  }
  Eigen::MatrixXcd state = Eigen::MatrixXcd::Zero(levels, levels);
  state.diagonal() = populations.cast<Complex>();
  return DensityMatrix::checked(std::move(state));
}

HermitianOperator build_total_hamiltonian(const SystemSpec& system,
                                          const DiscreteBath& bath,
                                          const TruncationSpec& trunc,
                                          bool renormalize) {
  check_truncation(bath, trunc, system.dim());
  const Eigen::Index d = system.dim();
  const std::vector<int>& levels = trunc.levels_per_mode;
  const Eigen::Index bath_dim = bath_dimension(levels);

  Eigen::MatrixXcd system_energy = Eigen::MatrixXcd::Zero(d, d);
  system_energy.diagonal() = system.energies().cast<Complex>();
  Eigen::MatrixXcd pointer = Eigen::MatrixXcd::Zero(d, d);
  pointer.diagonal() = system.pointer_values().cast<Complex>();

  Eigen::MatrixXcd bath_energy = Eigen::MatrixXcd::Zero(bath_dim, bath_dim);
  Eigen::MatrixXcd bath_coupling = Eigen::MatrixXcd::Zero(bath_dim, bath_dim);
  double renorm_shift = 0.0;
  for (std::size_t k = 0; k < bath.size(); ++k) {
    const BathMode& mode = bath.modes[k];
    const Eigen::MatrixXcd a = lowering_operator(levels[k]);
    const Eigen::MatrixXcd number = a.adjoint() * a;
    bath_energy += embed_in_bath(mode.omega * number, levels, k);
    bath_coupling += embed_in_bath(
        std::conj(mode.g) * a + mode.g * a.adjoint(), levels, k);
    renorm_shift += std::norm(mode.g) / mode.omega;
  }

  const Eigen::MatrixXcd id_system = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd id_bath =
      Eigen::MatrixXcd::Identity(bath_dim, bath_dim);
  Eigen::MatrixXcd h =
      Eigen::kroneckerProduct(system_energy, id_bath).eval() +
      Eigen::kroneckerProduct(id_system, bath_energy).eval() +
      Eigen::kroneckerProduct(pointer, bath_coupling).eval();
  if (renormalize) {
    Eigen::MatrixXcd pointer_sq = Eigen::MatrixXcd::Zero(d, d);
    pointer_sq.diagonal() =
        system.pointer_values().array().square().cast<Complex>();
    h += renorm_shift * Eigen::kroneckerProduct(pointer_sq, id_bath).eval();
  }
  return HermitianOperator::checked(std::move(h), "total hamiltonian");
}

Propagator::Propagator(const HermitianOperator& hamiltonian,
                       const SystemSpec& system, const DiscreteBath& bath,
                       const Temperature& beta, const TruncationSpec& trunc) {
  check_truncation(bath, trunc, system.dim());
  system_dim_ = system.dim();
  bath_dim_ = bath_dimension(trunc.levels_per_mode);
  if (hamiltonian.dim() != system_dim_ * bath_dim_) {
    throw DimensionMismatch(
        "hamiltonian dimension " + std::to_string(hamiltonian.dim()) +
        " does not match system x bath dimension " +
        std::to_string(system_dim_ * bath_dim_));
  }

  Eigen::MatrixXcd rho_total = system.rho0().entries();
  for (std::size_t k = 0; k < bath.size(); ++k) {
    const DensityMatrix theta =
        thermal_mode_state(bath.modes[k], beta, trunc.levels_per_mode[k]);
    rho_total =
        Eigen::kroneckerProduct(rho_total, theta.entries()).eval();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.matrix());
  if (solver.info() != Eigen::Success) {
    throw EigendecompositionFailure(
        "eigendecomposition failed for dimension " +
        std::to_string(hamiltonian.dim()));
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  Eigen::MatrixXcd w =
      eigenvectors_.adjoint() * rho_total * eigenvectors_;
  rho0_eigenbasis_ = 0.5 * (w + Eigen::MatrixXcd(w.adjoint()));
}

DensityMatrix Propagator::reduced_at(double t) const {
  if (!(t >= 0.0)) {
    throw NegativeTime("oracle evolution needs t >= 0: got " +
                       std::to_string(t));
  }
  const Eigen::Index total = eigenvalues_.size();
  Eigen::VectorXcd phases(total);
  for (Eigen::Index j = 0; j < total; ++j) {
    phases(j) = std::exp(Complex(0.0, -eigenvalues_(j) * t));
  }
  const Eigen::MatrixXcd rotated =
      phases.asDiagonal() * rho0_eigenbasis_ *
      phases.conjugate().asDiagonal();
  const Eigen::MatrixXcd rho_total =
      eigenvectors_ * rotated * eigenvectors_.adjoint();

  Eigen::MatrixXcd reduced =
      Eigen::MatrixXcd::Zero(system_dim_, system_dim_);
  for (Eigen::Index m = 0; m < system_dim_; ++m) {
    for (Eigen::Index n = 0; n < system_dim_; ++n) {
      Complex sum(0.0, 0.0);
      for (Eigen::Index b = 0; b < bath_dim_; ++b) {
        sum += rho_total(m * bath_dim_ + b, n * bath_dim_ + b);
      }
      reduced(m, n) = sum;
    }
  }
  return DensityMatrix::checked(std::move(reduced));
}

Eigen::MatrixXcd Propagator::propagator_at(double t) const {
  const Eigen::Index total = eigenvalues_.size();
  Eigen::VectorXcd phases(total);
  for (Eigen::Index j = 0; j < total; ++j) {
    phases(j) = std::exp(Complex(0.0, -eigenvalues_(j) * t));
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

DensityMatrix evolve_and_trace(const HermitianOperator& hamiltonian,
                               const SystemSpec& system,
                               const DiscreteBath& bath,
                               const Temperature& beta,
                               const TruncationSpec& trunc, double t) {
  return Propagator(hamiltonian, system, bath, beta, trunc).reduced_at(t);
}

TruncationResult converge_truncation(const SystemSpec& system,
                                     const DiscreteBath& bath,
                                     const Temperature& beta, double t_max,
                                     double tol,
                                     std::size_t dimension_budget,
                                     bool renormalize) {
  if (!(tol > 0.0)) {
    throw InvalidArgument("convergence tolerance must be > 0");
  }
  if (!(t_max >= 0.0)) {
    throw NegativeTime("truncation convergence needs t_max >= 0: got " +
                       std::to_string(t_max));
  }
  if (bath.size() == 0) {
    return TruncationResult{TruncationSpec{{}, tol, dimension_budget}, 0.0};
  }

  const double lambda_max = system.pointer_values().cwiseAbs().maxCoeff();
  double max_shift_sq = 0.0;
  for (const BathMode& mode : bath.modes) {
    const double shift = lambda_max * std::abs(mode.g) / mode.omega;
    max_shift_sq = std::max(max_shift_sq, shift * shift);
  }
  int level = std::max(4, static_cast<int>(std::ceil(4.0 * max_shift_sq)));

  const auto reduced_for = [&](int n) {
    TruncationSpec trunc{std::vector<int>(bath.size(), n), tol,
                         dimension_budget};
    const HermitianOperator h =
        build_total_hamiltonian(system, bath, trunc, renormalize);
    return Propagator(h, system, bath, beta, trunc).reduced_at(t_max);
  };

  const auto fits_budget = [&](int n) {
    double total = static_cast<double>(system.dim());
    for (std::size_t k = 0; k < bath.size(); ++k) {
      total *= static_cast<double>(n);
    }
    return total <= static_cast<double>(dimension_budget);
  };

  if (!fits_budget(level)) {
    throw DimensionBudgetExceeded(
        "starting truncation level " + std::to_string(level) +
        " already exceeds dimension budget " +
        std::to_string(dimension_budget));
  }

  DensityMatrix current = reduced_for(level);
  double best_delta = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    const int next = (3 * level + 1) / 2;
    if (!fits_budget(next)) {
      throw DimensionBudgetExceeded(
          "truncation level " + std::to_string(next) +
              " exceeds dimension budget " + std::to_string(dimension_budget) +
              " before reaching tolerance " + std::to_string(tol),
          best_delta);
    }
    const DensityMatrix refined = reduced_for(next);
    const double delta =
        (refined.entries() - current.entries()).cwiseAbs().maxCoeff();
    if (std::isnan(best_delta) || delta < best_delta) {
      best_delta = delta;
    }
    if (delta < tol) {
      return TruncationResult{
          TruncationSpec{std::vector<int>(bath.size(), level), tol,
                         dimension_budget},
          delta};
    }
    level = next;
    current = refined;
  }
}

}  // namespace dephase::oracle
