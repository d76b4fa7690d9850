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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <string>

#include "onestep/error.hpp"
#include "onestep/linalg.hpp"

namespace onestep {

/// Local invariants (G₁, G₂) of a two-qubit gate.
struct MakhlinInvariants {
  Complex g1{0.0, 0.0};
  Complex g2{0.0, 0.0};
};

inline double invariant_gap(const MakhlinInvariants& a, const MakhlinInvariants& b) {
  return std::max(std::abs(a.g1 - b.g1), std::abs(a.g2 - b.g2));
}

/// Change of basis to the magic (Bell-like) basis; rows scaled by 1/√2 so it
/// is unitary.
inline Mat4 magic_basis() {
  Mat4 q;
  // clang-format off
  q << 1.0, 0.0, 0.0, kI,
       0.0, kI,  1.0, 0.0,
       0.0, kI,  -1.0, 0.0,
       1.0, 0.0, 0.0, -kI;
  // clang-format on
  return q / std::sqrt(2.0);
}

inline constexpr double kUnitaryTol = 1e-8;

inline void require_unitary(const Mat4& u, const char* what) {
  if (!(unitarity_defect(u) < kUnitaryTol))
    fail(ErrorKind::kNotUnitary, std::string(what) + " is not unitary");
}

/// G₁ = tr²m / (16 det X), G₂ = (tr²m − tr m²) / (4 det X), with
/// m = X_Bᵀ X_B and X_B = Q† X Q.
inline MakhlinInvariants makhlin_invariants(const Mat4& x) {
  require_unitary(x, "gate");
  const Mat4 q = magic_basis();
  const Mat4 xb = q.adjoint() * x * q;
  const Mat4 m = xb.transpose() * xb;
  const Complex det = x.determinant();
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), (tr * tr - tr2) / (4.0 * det)};
}

/// A named target unitary with its invariants when they are known in closed
/// form.
struct GateTarget {
  std::string name;
  Mat4 matrix = Mat4::Identity();
  std::optional<MakhlinInvariants> known;

  MakhlinInvariants invariants() const {
    return known ? *known : makhlin_invariants(matrix);
  }
};

struct GateDistance {
  double raw = 0.0;
  double phase_optimized = 0.0;
  /// Global phase φ minimizing ||X − e^{iφ} U||.
  double phase = 0.0;
};

/// Frobenius distance ||X − U|| and its minimum over a global phase, attained
/// at φ = arg Tr(X†U). The minimum equals √(8 − 2|Tr X†U|) but is evaluated
/// as a norm, which avoids cancellation near zero.
inline GateDistance gate_distance(const Mat4& u, const Mat4& x) {
  require_unitary(u, "evolution");
  require_unitary(x, "target");
  const Complex overlap = (x.adjoint() * u).trace();
  GateDistance d;
  d.raw = frobenius(x - u);
  const Complex rot = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  d.phase_optimized = frobenius(x - std::conj(rot) * u);
  d.phase = -std::arg(rot);
  return d;
}

inline GateDistance gate_distance(const Mat4& u, const GateTarget& x) {
  return gate_distance(u, x.matrix);
}

/// Average gate fidelity (|Tr X†U|² + d) / (d(d+1)) with d = 4.
inline double average_gate_fidelity(const Mat4& u, const Mat4& x) {
  const double o = std::abs((x.adjoint() * u).trace());
  return (o * o + 4.0) / 20.0;
}

inline constexpr double kEquivalenceTol = 1e-6;

inline bool is_equivalent(const Mat4& u, const GateTarget& x, double tol = kEquivalenceTol) {
  if (!(tol > 0.0)) fail(ErrorKind::kInvalidParameter, "tolerance must be positive");
  const MakhlinInvariants a = makhlin_invariants(u);
  const MakhlinInvariants b = x.invariants();
  return std::abs(a.g1 - b.g1) < tol && std::abs(a.g2 - b.g2) < tol;
}

/// Largest |eigenvalue| of a Hermitian generator.
inline double spectral_norm(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(3)));
}

}  // namespace onestep
