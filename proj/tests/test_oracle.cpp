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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "dephase/core.hpp"
#include "dephase/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

namespace dephase {
namespace {

using oracle::HermitianOperator;
using oracle::Propagator;
using oracle::TruncationResult;
using oracle::TruncationSpec;
using testing::Lcg;

SystemSpec plus_state_qubit() {
  Eigen::VectorXd energies(2);
  energies << 0.0, 1.0;
  Eigen::VectorXd pointer_values(2);
  pointer_values << 0.0, 1.0;
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  return validate_system(energies, pointer_values, rho0);
}

TEST_CASE("thermal_mode_state populations") {
  const BathMode mode(1.0, Complex(0.1, 0.0));

  SUBCASE("zero temperature is the ground-state projector") {
    const DensityMatrix s =
        oracle::thermal_mode_state(mode, Temperature::infinite(), 5);
    CHECK(s(0, 0) == Complex(1.0, 0.0));
    for (int j = 1; j < 5; ++j) CHECK(s(j, j) == Complex(0.0, 0.0));
  }
  SUBCASE("geometric populations at beta omega = ln 2") {
    const DensityMatrix s =
        oracle::thermal_mode_state(mode, Temperature(std::log(2.0)), 4);
    // Populations 1, 1/2, 1/4, 1/8 normalized by 15/8.
    const double norm = 8.0 / 15.0;
    CHECK(s(0, 0).real() == doctest::Approx(norm).epsilon(1e-14));
    CHECK(s(1, 1).real() == doctest::Approx(norm / 2.0).epsilon(1e-14));
    CHECK(s(2, 2).real() == doctest::Approx(norm / 4.0).epsilon(1e-14));
    CHECK(s(3, 3).real() == doctest::Approx(norm / 8.0).epsilon(1e-14));
  }
  SUBCASE("mean occupation approaches the Bose-Einstein value") {
    const Temperature beta(2.0);
    const int levels = 20;  // exp(-2 * 20) ~ 4e-18, truncation negligible
    const DensityMatrix s = oracle::thermal_mode_state(mode, beta, levels);
    double mean = 0.0;
    for (int j = 0; j < levels; ++j) mean += j * s(j, j).real();
    const double bose = 1.0 / (std::exp(2.0) - 1.0);
    CHECK(mean == doctest::Approx(bose).epsilon(1e-8));
  }
  SUBCASE("off-diagonals vanish") {
    const DensityMatrix s =
        oracle::thermal_mode_state(mode, Temperature(1.0), 6);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        if (r != c) CHECK(s(r, c) == Complex(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("HermitianOperator::checked rejects asymmetric matrices") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS_AS(HermitianOperator::checked(bad, "bad"), NotHermitian);
  Eigen::MatrixXcd good(2, 2);
  good << 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 1.0;
  CHECK_NOTHROW(HermitianOperator::checked(good, "good"));
}

TEST_CASE("build_total_hamiltonian structure") {
  const SystemSpec sys = plus_state_qubit();

  SUBCASE("no modes leaves the bare system energies") {
    const DiscreteBath empty;
    const TruncationSpec trunc{{}, 0.0, 4096};
    const HermitianOperator h =
        oracle::build_total_hamiltonian(sys, empty, trunc, false);
    REQUIRE(h.dim() == 2);
    CHECK(h.matrix()(0, 0) == Complex(0.0, 0.0));
    CHECK(h.matrix()(1, 1) == Complex(1.0, 0.0));
    CHECK(h.matrix()(0, 1) == Complex(0.0, 0.0));
  }
  SUBCASE("uncoupled oscillator contributes a ladder spectrum") {
    Eigen::VectorXd e(2), p(2);
    e << 0.0, 0.0;  // degenerate system: spectrum is the oscillator's
    p << 0.0, 0.0;  // lambda = 0 kills the interaction term
    Eigen::MatrixXcd rho(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    const SystemSpec flat = validate_system(e, p, rho);
    DiscreteBath bath;
    bath.modes.emplace_back(1.7, Complex(0.4, 0.2));
    const TruncationSpec trunc{{3}, 0.0, 4096};
    const HermitianOperator h =
        oracle::build_total_hamiltonian(flat, bath, trunc, false);
    REQUIRE(h.dim() == 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    REQUIRE(solver.info() == Eigen::Success);
    const Eigen::VectorXd ev = solver.eigenvalues();
    // Each oscillator level appears twice (two system states).
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev(2) == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(ev(4) == doctest::Approx(3.4).epsilon(1e-13));
  }
  SUBCASE("system energies commute with the full Hamiltonian") {
    DiscreteBath bath;
    bath.modes.emplace_back(1.0, Complex(0.4, 0.0));
    bath.modes.emplace_back(2.3, Complex(0.0, 0.7));
    const TruncationSpec trunc{{4, 3}, 0.0, 4096};
    const HermitianOperator h =
        oracle::build_total_hamiltonian(sys, bath, trunc, false);
    REQUIRE(h.dim() == 24);
    Eigen::MatrixXcd sys_energy = Eigen::MatrixXcd::Zero(24, 24);
    for (int m = 0; m < 2; ++m) {
      for (int b = 0; b < 12; ++b) {
        sys_energy(m * 12 + b, m * 12 + b) = sys.energies()(m);
      }
    }
    const Eigen::MatrixXcd comm =
        sys_energy * h.matrix() - h.matrix() * sys_energy;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("renormalization adds the static pointer-squared shift") {
    DiscreteBath bath;
    bath.modes.emplace_back(2.0, Complex(0.6, 0.0));
    const TruncationSpec trunc{{3}, 0.0, 4096};
    const Eigen::MatrixXcd plain =
        oracle::build_total_hamiltonian(sys, bath, trunc, false).matrix();
    const Eigen::MatrixXcd shifted =
        oracle::build_total_hamiltonian(sys, bath, trunc, true).matrix();
    const Eigen::MatrixXcd diff = shifted - plain;
    const double shift = 0.36 / 2.0;  // |g|^2 / omega
    for (int m = 0; m < 2; ++m) {
      const double lambda = sys.pointer_values()(m);
      for (int b = 0; b < 3; ++b) {
        CHECK(std::abs(diff(m * 3 + b, m * 3 + b) -
                       Complex(lambda * lambda * shift, 0.0)) < 1e-14);
      }
    }
    CHECK((diff - Eigen::MatrixXcd(diff.diagonal().asDiagonal()))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }
  SUBCASE("level counts are validated") {
    DiscreteBath bath;
    bath.modes.emplace_back(1.0, Complex(0.4, 0.0));
    CHECK_THROWS_AS(oracle::build_total_hamiltonian(
                        sys, bath, TruncationSpec{{1}, 0.0, 4096}, false),
                    InvalidArgument);
    CHECK_THROWS_AS(oracle::build_total_hamiltonian(
                        sys, bath, TruncationSpec{{4, 4}, 0.0, 4096}, false),
                    DimensionMismatch);
    CHECK_THROWS_AS(oracle::build_total_hamiltonian(
                        sys, bath, TruncationSpec{{3000}, 0.0, 4096}, false),
                    DimensionBudgetExceeded);
  }
}

TEST_CASE("Propagator is unitary and reduces correctly at t = 0") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.0, Complex(0.4, 0.0));
  bath.modes.emplace_back(2.3, Complex(0.0, 0.7));
  const TruncationSpec trunc{{5, 4}, 0.0, 4096};
  const Temperature beta(2.0);
  const HermitianOperator h =
      oracle::build_total_hamiltonian(sys, bath, trunc, false);
  const Propagator prop(h, sys, bath, beta, trunc);

  SUBCASE("U(t) is unitary") {
    const Eigen::MatrixXcd u = prop.propagator_at(1.3);
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("t = 0 returns the initial reduced state") {
    const DensityMatrix r = prop.reduced_at(0.0);
    CHECK((r.entries() - sys.rho0().entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("trace and populations are preserved") {
    const DensityMatrix r = prop.reduced_at(2.9);
    CHECK(std::abs(r.entries().trace() - Complex(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(r(0, 0) - sys.rho0()(0, 0)) < 1e-10);
    CHECK(std::abs(r(1, 1) - sys.rho0()(1, 1)) < 1e-10);
  }
}

TEST_CASE("zero coupling reduces the oracle to free evolution") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.3, Complex(0.0, 0.0));
  bath.modes.emplace_back(2.1, Complex(0.0, 0.0));
  const TruncationSpec trunc{{3, 3}, 0.0, 4096};
  const Temperature beta(1.0);
  const HermitianOperator h =
      oracle::build_total_hamiltonian(sys, bath, trunc, false);
  for (const double t : {0.0, 0.7, 3.1, 9.4}) {
    const DensityMatrix reduced =
        oracle::evolve_and_trace(h, sys, bath, beta, trunc, t);
    const DensityMatrix free = free_evolution(sys, t);
    CHECK((reduced.entries() - free.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("oracle matches the closed form on a small coupled instance") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.0, Complex(0.3, 0.0));
  const Temperature beta(2.0);
  const TruncationSpec trunc{{16}, 0.0, 4096};

  for (const bool renorm : {false, true}) {
    const HermitianOperator h =
        oracle::build_total_hamiltonian(sys, bath, trunc, renorm);
    const Propagator prop(h, sys, bath, beta, trunc);
    for (const double t : {0.5, 2.0, 5.0}) {
      const DensityMatrix numeric = prop.reduced_at(t);
      const DensityMatrix closed =
          reduced_density_matrix(sys, bath, beta, t, renorm);
      CHECK((numeric.entries() - closed.entries()).cwiseAbs().maxCoeff() <
            1e-8);
    }
  }
}

TEST_CASE("oracle matches the closed form on a qutrit with two modes") {
  Eigen::VectorXd e(3), p(3);
  e << 0.0, 0.8, 1.7;
  p << -0.5, 0.2, 0.9;
  Lcg rng(0x5eed0101);
  const Eigen::MatrixXcd rho0 = testing::random_density(rng, 3);
  const SystemSpec sys = validate_system(e, p, rho0);
  DiscreteBath bath;
  bath.modes.emplace_back(0.9, Complex(0.25, 0.1));
  bath.modes.emplace_back(1.8, Complex(0.0, 0.3));
  const Temperature beta(1.5);
  const TruncationSpec trunc{{12, 9}, 0.0, 4096};
  const HermitianOperator h =
      oracle::build_total_hamiltonian(sys, bath, trunc, false);
  const Propagator prop(h, sys, bath, beta, trunc);
  for (const double t : {0.8, 3.2}) {
    const DensityMatrix numeric = prop.reduced_at(t);
    const DensityMatrix closed = reduced_density_matrix(sys, bath, beta, t);
    CHECK((numeric.entries() - closed.entries()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("converge_truncation settles immediately for zero coupling") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.0, Complex(0.0, 0.0));
  const TruncationResult result =
      oracle::converge_truncation(sys, bath, Temperature(1.0), 5.0, 1e-8);
  REQUIRE(result.spec.levels_per_mode.size() == 1);
  CHECK(result.spec.levels_per_mode[0] == 4);  // starting depth
  // The reduced state is level-independent here; only eigensolver round-off
  // separates successive truncations.
  CHECK(result.achieved_delta < 1e-12);
  CHECK(result.spec.convergence_tol == 1e-8);
}

TEST_CASE("converge_truncation reaches the worked d=2 K=2 instance") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.0, Complex(0.4, 0.0));
  bath.modes.emplace_back(2.3, Complex(0.7, 0.0));
  const Temperature beta(2.0);
  const TruncationResult result =
      oracle::converge_truncation(sys, bath, beta, 5.0, 1e-6);
  CHECK(result.achieved_delta < 1e-6);
  for (const int n : result.spec.levels_per_mode) CHECK(n >= 4);

  // The accepted truncation must actually reproduce the closed form.
  const HermitianOperator h =
      oracle::build_total_hamiltonian(sys, bath, result.spec, false);
  const DensityMatrix numeric =
      oracle::evolve_and_trace(h, sys, bath, beta, result.spec, 5.0);
  const DensityMatrix closed = reduced_density_matrix(sys, bath, beta, 5.0);
  CHECK((numeric.entries() - closed.entries()).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("converge_truncation surfaces budget exhaustion with its best try") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(0.5, Complex(2.0, 0.0));  // needs deep Fock levels
  try {
    oracle::converge_truncation(sys, bath, Temperature(1.0), 10.0, 1e-12, 64);
    FAIL("expected DimensionBudgetExceeded");
  } catch (const DimensionBudgetExceeded& e) {
    // Budget 64 with d = 2 allows at most 32 levels; the delta seen before
    // giving up is attached when at least two levels were compared.
    CHECK((std::isnan(e.best_delta()) || e.best_delta() >= 0.0));
  }
}

TEST_CASE("renormalization leaves oracle magnitudes unchanged") {
  const SystemSpec sys = plus_state_qubit();
  DiscreteBath bath;
  bath.modes.emplace_back(1.0, Complex(0.4, 0.0));
  const Temperature beta(2.0);
  const TruncationSpec trunc{{14}, 0.0, 4096};
  const Propagator plain(
      oracle::build_total_hamiltonian(sys, bath, trunc, false), sys, bath,
      beta, trunc);
  const Propagator renorm(
      oracle::build_total_hamiltonian(sys, bath, trunc, true), sys, bath,
      beta, trunc);
  for (const double t : {0.5, 2.0, 4.5}) {
    const Eigen::MatrixXcd a = plain.reduced_at(t).entries().cwiseAbs();
    const Eigen::MatrixXcd b = renorm.reduced_at(t).entries().cwiseAbs();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

}  // namespace
}  // namespace dephase
