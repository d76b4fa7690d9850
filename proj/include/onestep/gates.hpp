// Copyright 2026 The onestep Authors
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

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "onestep/error.hpp"
#include "onestep/invariants.hpp"
#include "onestep/linalg.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

inline constexpr std::array<std::string_view, 7> kGateNames = {
    "CNOT", "B", "SWAP", "SQRT_SWAP", "IDENTITY", "RNOT", "QFT"};

inline Mat4 cnot_matrix() {
  Mat4 x = Mat4::Zero();
  x(0, 0) = x(1, 1) = 1.0;
  x(2, 3) = x(3, 2) = 1.0;
  return x;
}

inline Mat4 swap_matrix() {
  Mat4 x = Mat4::Zero();
  x(0, 0) = x(3, 3) = 1.0;
  x(1, 2) = x(2, 1) = 1.0;
  return x;
}

/// √SWAP with the |↑↓⟩, |↓↑⟩ block ((1+i)/2, (1−i)/2; (1−i)/2, (1+i)/2).
inline Mat4 sqrt_swap_matrix() {
  Mat4 x = Mat4::Zero();
  x(0, 0) = x(3, 3) = 1.0;
  x(1, 1) = x(2, 2) = Complex(0.5, 0.5);
  x(1, 2) = x(2, 1) = Complex(0.5, -0.5);
  return x;
}

/// exp(i(π/4 σˣσˣ + π/8 σʸσʸ)), the standard representative of the B class.
inline Mat4 b_gate_matrix() {
  const Mat4 g = (kPi / 4.0) * pauli_tensor(Axis::kX, Axis::kX) +
                 (kPi / 8.0) * pauli_tensor(Axis::kY, Axis::kY);
  return propagator(-g, 1.0);
}

/// Controlled √NOT: √σˣ = ((1+i)/2, (1−i)/2; (1−i)/2, (1+i)/2) on the target.
inline Mat4 rnot_matrix() {
  Mat4 x = Mat4::Zero();
  x(0, 0) = x(1, 1) = 1.0;
  x(2, 2) = x(3, 3) = Complex(0.5, 0.5);
  x(2, 3) = x(3, 2) = Complex(0.5, -0.5);
  return x;
}

/// Two-qubit discrete Fourier transform, X_jk = ω^{jk}/2 with ω = i.
inline Mat4 qft_matrix() {
  Mat4 x;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) x(j, k) = std::pow(kI, (j * k) % 4) / 2.0;
  return x;
}

inline GateTarget target_gate(std::string_view name) {
  GateTarget t;
  t.name = std::string(name);
  if (name == "CNOT") {
    t.matrix = cnot_matrix();
    t.known = MakhlinInvariants{0.0, 1.0};
  } else if (name == "B") {
    t.matrix = b_gate_matrix();
    t.known = MakhlinInvariants{0.0, 0.0};
  } else if (name == "SWAP") {
    t.matrix = swap_matrix();
    t.known = MakhlinInvariants{-1.0, -3.0};
  } else if (name == "SQRT_SWAP") {
    t.matrix = sqrt_swap_matrix();
  } else if (name == "IDENTITY") {
    t.matrix = Mat4::Identity();
    t.known = MakhlinInvariants{1.0, 3.0};
  } else if (name == "RNOT") {
    t.matrix = rnot_matrix();
  } else if (name == "QFT") {
    t.matrix = qft_matrix();
  } else {
    fail(ErrorKind::kUnknownName, "unknown gate '" + std::string(name) + "'");
  }
  return t;
}

}  // namespace onestep
