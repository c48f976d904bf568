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

#include <cstdint>

#include "dephase/types.hpp"

namespace dephase::testing {

// Deterministic 64-bit LCG so property-style tests are reproducible without
// seeding ceremony.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  double uniform() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }

  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  Complex complex_in_disk(double radius) {
    const double re = range(-radius, radius);
    const double im = range(-radius, radius);
    return Complex(re, im);
  }

 private:
  std::uint64_t state_;
};

// M M^dag / tr(M M^dag) for a random complex M: Hermitian, unit trace,
// positive semidefinite by construction.
inline Eigen::MatrixXcd random_density(Lcg& rng, int d) {
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m(r, c) = rng.complex_in_disk(1.0);
    }
  }
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + Eigen::MatrixXcd(rho.adjoint()));
  return rho;
}

inline SystemSpec random_system(Lcg& rng, int d) {
  Eigen::VectorXd energies(d);
  Eigen::VectorXd pointer_values(d);
  for (int i = 0; i < d; ++i) {
    energies(i) = rng.range(-2.0, 2.0);
    pointer_values(i) = rng.range(-1.5, 1.5);
  }
  return validate_system(energies, pointer_values, random_density(rng, d));
}

inline DiscreteBath random_bath(Lcg& rng, int modes, double max_coupling) {
  DiscreteBath bath;
  bath.modes.reserve(modes);
  for (int k = 0; k < modes; ++k) {
    bath.modes.emplace_back(rng.range(0.3, 3.0),
                            rng.complex_in_disk(max_coupling));
  }
  return bath;
}

}  // namespace dephase::testing
