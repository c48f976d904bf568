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

#include "dephase/types.hpp"

#include <cmath>
#include <sstream>

namespace dephase {

double Temperature::coth_half(double omega) const {
  if (!(omega > 0.0)) {
    throw NonpositiveOmega("coth_half requires omega > 0: got " +
                           std::to_string(omega));
  }
  if (is_infinite()) return 1.0;
  const double x = 0.5 * beta_ * omega;
  if (beta_ * omega < 1e-4) return 1.0 / x + x / 3.0;
  return 1.0 / std::tanh(x);
}

DensityMatrix DensityMatrix::checked(Eigen::MatrixXcd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    std::ostringstream os;
    os << "density matrix must be square with d >= 1, got " << entries.rows()
       << "x" << entries.cols();
    throw DimensionMismatch(os.str());
  }

  const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kHermitianTol)) {
    std::ostringstream os;
    os << "density matrix is not Hermitian: max |rho - rho^dagger| = " << herm;
    throw NotHermitian(os.str());
  }

  const Complex tr = entries.trace();
  if (!(std::abs(tr - Complex(1.0, 0.0)) <= kTraceTol)) {
    std::ostringstream os;
    os << "density matrix trace must be 1, got (" << tr.real() << ", "
       << tr.imag() << ")";
    throw TraceNotOne(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigendecompositionFailure(
        "eigenvalue check failed while validating density matrix");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  if (!(min_eig >= kEigenvalueFloor)) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite: smallest eigenvalue = "
       << min_eig;
    throw NotPositiveSemidefinite(os.str());
  }

  return DensityMatrix(std::move(entries));
}

SystemSpec validate_system(Eigen::VectorXd energies,
                           Eigen::VectorXd pointer_values,
                           Eigen::MatrixXcd rho0) {
  const auto d = energies.size();
  if (d < 1) {
    throw DimensionMismatch("system dimension must be >= 1");
  }
  if (pointer_values.size() != d || rho0.rows() != d || rho0.cols() != d) {
    std::ostringstream os;
    os << "dimension mismatch: " << d << " energies, " << pointer_values.size()
       << " pointer values, " << rho0.rows() << "x" << rho0.cols() << " rho0";
    throw DimensionMismatch(os.str());
  }
  return SystemSpec(std::move(energies), std::move(pointer_values),
                    DensityMatrix::checked(std::move(rho0)));
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 4) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace dephase
