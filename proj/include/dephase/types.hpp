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

#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dephase {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Error taxonomy.
//
// ValidationError: the inputs violate a documented precondition or invariant
// (CLI exit code 1). NumericalError: inputs were fine but the computation
// could not meet its contract within its budget (CLI exit code 2).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TraceNotOne : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveSemidefinite : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonpositiveOmega : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NegativeTime : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidTemperature : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RegimeUndefined : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientSamples : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonpositiveGamma : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Carries the best estimate reached when the requested tolerance was not.
class QuadratureNonconvergence : public NumericalError {
 public:
  QuadratureNonconvergence(const std::string& msg, double achieved_value,
                           double achieved_error)
      : NumericalError(msg),
        achieved_value_(achieved_value),
        achieved_error_(achieved_error) {}

  double achieved_value() const { return achieved_value_; }
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_value_;
  double achieved_error_;
};

class DimensionBudgetExceeded : public NumericalError {
 public:
  explicit DimensionBudgetExceeded(
      const std::string& msg,
      double best_delta = std::numeric_limits<double>::quiet_NaN())
      : NumericalError(msg), best_delta_(best_delta) {}

  // Best max-norm convergence delta reached before the budget ran out.
  // NaN when no two levels were compared.
  double best_delta() const { return best_delta_; }

 private:
  double best_delta_;
};

class EigendecompositionFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// ---------------------------------------------------------------------------
// Inverse temperature. beta = +infinity is the zero-temperature limit and is
// a supported distinguished value.

class Temperature {
 public:
  explicit Temperature(double beta) : beta_(beta) {
    if (!(beta > 0.0)) {
      throw InvalidTemperature("beta must be > 0 (or infinite): got " +
                               std::to_string(beta));
    }
  }

  static Temperature infinite() {
    return Temperature(std::numeric_limits<double>::infinity(), Tag{});
  }

  double beta() const { return beta_; }
  bool is_infinite() const { return std::isinf(beta_); }

  // coth(beta*omega/2). Tends to 1 at beta = infinity. For beta*omega < 1e-4
  // the Laurent expansion 1/x + x/3 is used; direct evaluation loses
  // precision there.
  double coth_half(double omega) const;

 private:
  struct Tag {};
  Temperature(double beta, Tag) : beta_(beta) {}
  double beta_;
};

// ---------------------------------------------------------------------------
// Complex Hermitian, unit-trace, positive-semidefinite matrix in the
// preferred basis. `checked` enforces all three invariants.

class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  static DensityMatrix checked(Eigen::MatrixXcd entries);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  Complex operator()(Eigen::Index m, Eigen::Index n) const {
    return entries_(m, n);
  }

 private:
  explicit DensityMatrix(Eigen::MatrixXcd entries)
      : entries_(std::move(entries)) {}
  Eigen::MatrixXcd entries_;
};

// One bosonic mode: frequency omega > 0 and coupling g (both inverse time).
struct BathMode {
  BathMode(double omega_in, Complex g_in) : omega(omega_in), g(g_in) {
    if (!(omega > 0.0)) {
      throw NonpositiveOmega("bath mode frequency must be > 0: got " +
                             std::to_string(omega_in));
    }
  }

  double omega;
  Complex g;
};

// Finite mode collection. Empty bath means free evolution.
struct DiscreteBath {
  std::vector<BathMode> modes;

  std::size_t size() const { return modes.size(); }
};

// System eigenvalues in the common eigenbasis of the system Hamiltonian and
// the pointer observable, plus the initial density matrix. Only eigenvalues
// are stored; the two operators commute so the shared basis is implicit.
class SystemSpec {
 public:
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::VectorXd& pointer_values() const { return pointer_values_; }
  const DensityMatrix& rho0() const { return rho0_; }
  Eigen::Index dim() const { return energies_.size(); }

  friend SystemSpec validate_system(Eigen::VectorXd energies,
                                    Eigen::VectorXd pointer_values,
                                    Eigen::MatrixXcd rho0);

 private:
  SystemSpec(Eigen::VectorXd e, Eigen::VectorXd p, DensityMatrix r)
      : energies_(std::move(e)),
        pointer_values_(std::move(p)),
        rho0_(std::move(r)) {}

  Eigen::VectorXd energies_;
  Eigen::VectorXd pointer_values_;
  DensityMatrix rho0_;
};

SystemSpec validate_system(Eigen::VectorXd energies,
                           Eigen::VectorXd pointer_values,
                           Eigen::MatrixXcd rho0);

// Pairwise (cascade) summation; reproducible and more accurate than a left
// fold for long sums.
double pairwise_sum(std::span<const double> values);

}  // namespace dephase
