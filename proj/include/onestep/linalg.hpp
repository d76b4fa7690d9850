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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace onestep {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class Axis { kI, kX, kY, kZ };

inline Mat2 pauli(Axis a) {
  Mat2 m = Mat2::Zero();
  switch (a) {
    case Axis::kI: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case Axis::kX: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case Axis::kY: m(0, 1) = -kI; m(1, 0) = kI; break;
    case Axis::kZ: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

/// a ⊗ b with qubit 1 as the slow (left) index: row 2i+k, column 2j+l.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec4 kron(const Vec2& a, const Vec2& b) {
  Vec4 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out(2 * i + k) = a(i) * b(k);
  return out;
}

/// σᵃ ⊗ σᵇ in the basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ (σᶻ = diag(1, -1)).
inline Mat4 pauli_tensor(Axis a, Axis b) { return kron(pauli(a), pauli(b)); }

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Mat4& m) {
  return max_abs(m - m.adjoint());
}

inline double unitarity_defect(const Mat4& u) {
  return max_abs(u.adjoint() * u - Mat4::Identity());
}

inline double frobenius(const Mat4& m) { return m.norm(); }

inline Mat4 commutator(const Mat4& a, const Mat4& b) { return a * b - b * a; }

}  // namespace onestep
