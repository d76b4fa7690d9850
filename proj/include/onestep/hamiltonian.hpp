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
#include <optional>
#include <string>
#include <string_view>

#include "onestep/error.hpp"
#include "onestep/linalg.hpp"

namespace onestep {

// Every energy-like parameter in the library (controls, temperature, cutoff)
// is given in units of π per unit time, so a gate of duration t0 = 1 with
// |H| ~ 1 rotates by ~π. Matrices and eigenvalues are returned in rad per
// unit time, i.e. multiplied by kEnergyUnit.
inline constexpr double kEnergyUnit = kPi;

enum class Control { kDelta1, kDelta2, kEps1, kEps2, kJx, kJy, kJz, kT0 };

inline constexpr std::array<Control, 7> kHamiltonianControls = {
    Control::kDelta1, Control::kDelta2, Control::kEps1, Control::kEps2,
    Control::kJx,     Control::kJy,     Control::kJz};

constexpr std::string_view control_name(Control c) {
  switch (c) {
    case Control::kDelta1: return "delta1";
    case Control::kDelta2: return "delta2";
    case Control::kEps1: return "eps1";
    case Control::kEps2: return "eps2";
    case Control::kJx: return "jx";
    case Control::kJy: return "jy";
    case Control::kJz: return "jz";
    case Control::kT0: return "t0";
  }
  return "?";
}

inline std::optional<Control> parse_control(std::string_view name) {
  for (Control c : {Control::kDelta1, Control::kDelta2, Control::kEps1,
                    Control::kEps2, Control::kJx, Control::kJy, Control::kJz,
                    Control::kT0}) {
    if (control_name(c) == name) return c;
  }
  return std::nullopt;
}

/// The seven tunable controls of the two-qubit Hamiltonian plus the pulse
/// duration. Local fields are B_i = (delta_i, 0, eps_i).
struct HamiltonianParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  double t0 = 1.0;
  /// Optional amplitude bounds a_i, in kHamiltonianControls order.
  std::optional<std::array<double, 7>> bounds;

  double& operator[](Control c) {
    switch (c) {
      case Control::kDelta1: return delta1;
      case Control::kDelta2: return delta2;
      case Control::kEps1: return eps1;
      case Control::kEps2: return eps2;
      case Control::kJx: return jx;
      case Control::kJy: return jy;
      case Control::kJz: return jz;
      case Control::kT0: return t0;
    }
    return t0;
  }
  double operator[](Control c) const {
    return const_cast<HamiltonianParams&>(*this)[c];
  }

  double coupling_norm() const { return std::sqrt(jx * jx + jy * jy + jz * jz); }

  bool operator==(const HamiltonianParams&) const = default;
};

inline void validate(const HamiltonianParams& p) {
  for (Control c : kHamiltonianControls) {
    if (!std::isfinite(p[c]))
      fail(ErrorKind::kInvalidParameter,
           std::string(control_name(c)) + " is not finite");
  }
  if (!std::isfinite(p.t0) || p.t0 <= 0.0)
    fail(ErrorKind::kInvalidParameter, "t0 must be finite and positive");
  if (p.bounds) {
    for (std::size_t i = 0; i < kHamiltonianControls.size(); ++i) {
      const double a = (*p.bounds)[i];
      const double x = p[kHamiltonianControls[i]];
      if (!(a >= 0.0))
        fail(ErrorKind::kInvalidParameter, "bounds must be non-negative");
      if (std::abs(x) > a)
        fail(ErrorKind::kInvalidParameter,
             std::string(control_name(kHamiltonianControls[i])) +
                 " exceeds its amplitude bound");
    }
  }
}

/// Noiseless two-qubit Hamiltonian
///   H = Σ_i (Δ_i σˣ_i + ε_i σᶻ_i) + Σ_a J_a σᵃ_1 σᵃ_2
/// written out entrywise, in rad per unit time.
inline Mat4 build_hamiltonian(const HamiltonianParams& p) {
  validate(p);
  const double d1 = p.delta1, d2 = p.delta2, e1 = p.eps1, e2 = p.eps2;
  const double jx = p.jx, jy = p.jy, jz = p.jz;
  Mat4 h;
  // clang-format off
  h << jz + e1 + e2, d2,           d1,           jx - jy,
       d2,           e1 - e2 - jz, jx + jy,      d1,
       d1,           jx + jy,      e2 - e1 - jz, d2,
       jx - jy,      d1,           d2,           -e1 - e2 + jz;
  // clang-format on
  return kEnergyUnit * h;
}

/// Same operator assembled from Pauli tensor products; used to cross-check
/// build_hamiltonian.
inline Mat4 assemble_from_paulis(const HamiltonianParams& p) {
  using enum Axis;
  Mat4 h = p.delta1 * pauli_tensor(kX, kI) + p.eps1 * pauli_tensor(kZ, kI) +
           p.delta2 * pauli_tensor(kI, kX) + p.eps2 * pauli_tensor(kI, kZ) +
           p.jx * pauli_tensor(kX, kX) + p.jy * pauli_tensor(kY, kY) +
           p.jz * pauli_tensor(kZ, kZ);
  return kEnergyUnit * h;
}

}  // namespace onestep
