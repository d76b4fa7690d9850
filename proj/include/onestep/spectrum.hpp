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
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/linalg.hpp"

namespace onestep {

inline constexpr double kDefaultDegeneracyTol = 1e-8;
inline constexpr double kHermitianTol = 1e-10;

/// Ascending energies with orthonormal eigenvectors in the columns of
/// `vectors`. Phase convention: the largest-magnitude component of each
/// eigenvector is real and positive. Inside a degenerate cluster the basis is
/// rebuilt by projecting e1..e4 (in index order) onto the cluster and
/// Gram-Schmidt orthonormalizing.
struct EigenSystem {
  std::array<double, 4> energies{};
  Mat4 vectors = Mat4::Identity();

  /// Transition frequency ω_nm = E_n - E_m.
  double omega(int n, int m) const { return energies[n] - energies[m]; }

  Mat4 to_eigenbasis(const Mat4& op) const {
    return vectors.adjoint() * op * vectors;
  }
  Mat4 from_eigenbasis(const Mat4& op) const {
    return vectors * op * vectors.adjoint();
  }
};

namespace detail {

inline void fix_phase(Eigen::Ref<Vec4> v) {
  int best = 0;
  double mag = std::abs(v(0));
  for (int i = 1; i < 4; ++i) {
    // strict improvement beyond rounding keeps the first of near-ties
    if (std::abs(v(i)) > mag + 1e-12) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (mag > 0.0) {
    v *= std::conj(v(best)) / mag;
    v(best) = mag;
  }
}

inline void rebuild_cluster(Mat4& vecs, int begin, int end) {
  const int k = end - begin;
  Mat4 projector = Mat4::Zero();
  for (int c = begin; c < end; ++c)
    projector += vecs.col(c) * vecs.col(c).adjoint();

  std::vector<Vec4> basis;
  for (double threshold : {1e-4, 1e-10}) {
    basis.clear();
    for (int i = 0; i < 4 && static_cast<int>(basis.size()) < k; ++i) {
      Vec4 w = projector.col(i);
      for (const Vec4& u : basis) w -= u * u.dot(w);
      const double n = w.norm();
      if (n > threshold) basis.push_back(w / n);
    }
    if (static_cast<int>(basis.size()) == k) break;
  }
  if (static_cast<int>(basis.size()) != k) return;  // keep solver output
  for (int c = 0; c < k; ++c) vecs.col(begin + c) = basis[c];
}

}  // namespace detail

inline EigenSystem eigensystem(const Mat4& h,
                               double cluster_tol = kDefaultDegeneracyTol) {
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) > kHermitianTol * scale)
    fail(ErrorKind::kNonHermitian, "eigensystem requires a Hermitian matrix");

  const Mat4 sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(sym);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::kNonHermitian, "eigensolver failed");

  EigenSystem es;
  for (int i = 0; i < 4; ++i) es.energies[i] = solver.eigenvalues()(i);
  es.vectors = solver.eigenvectors();

  int begin = 0;
  for (int i = 1; i <= 4; ++i) {
    if (i == 4 || es.energies[i] - es.energies[i - 1] >= cluster_tol) {
      if (i - begin > 1) detail::rebuild_cluster(es.vectors, begin, i);
      begin = i;
    }
  }
  for (int c = 0; c < 4; ++c) detail::fix_phase(es.vectors.col(c));
  return es;
}

/// exp(-i t H) for Hermitian H.
inline Mat4 propagator(const EigenSystem& es, double t) {
  Vec4 phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(-kI * es.energies[i] * t);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

inline Mat4 propagator(const Mat4& h, double t) {
  return propagator(eigensystem(h), t);
}

/// Unitary generated by the parameters over their own duration t0.
inline Mat4 evolution(const HamiltonianParams& p) {
  return propagator(build_hamiltonian(p), p.t0);
}

/// Closed-form spectrum at the qubits' optimal points (ε1 = ε2 = 0), in rad
/// per unit time, in the labelling E1,2 = Jx ∓ r1, E3,4 = -Jx ± r2 (unsorted).
inline std::array<double, 4> spectrum_optimal_point(double delta1, double delta2,
                                                    double jx, double jy,
                                                    double jz) {
  const double r1 = std::hypot(delta1 + delta2, jy - jz);
  const double r2 = std::hypot(delta1 - delta2, jy + jz);
  return {kEnergyUnit * (jx - r1), kEnergyUnit * (jx + r1),
          kEnergyUnit * (-jx + r2), kEnergyUnit * (-jx - r2)};
}

enum class Degeneracy { kNone, kSingle, kDouble };

constexpr std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::kNone: return "none";
    case Degeneracy::kSingle: return "single";
    case Degeneracy::kDouble: return "double";
  }
  return "?";
}

inline std::optional<Degeneracy> parse_degeneracy(std::string_view s) {
  for (Degeneracy d : {Degeneracy::kNone, Degeneracy::kSingle, Degeneracy::kDouble})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

struct DegeneracyReport {
  double min_gap = 0.0;     // smallest adjacent gap of the sorted spectrum
  double lower_gap = 0.0;   // E2 - E1
  double upper_gap = 0.0;   // E4 - E3
  Degeneracy classification = Degeneracy::kNone;
  double tolerance = kDefaultDegeneracyTol;

  /// Distance from a two-pair split: max(E2 - E1, E4 - E3).
  double double_gap() const { return std::max(lower_gap, upper_gap); }
};

/// Double: both the lower and the upper pair are degenerate. Single: any
/// other coincidence of adjacent levels (a triple level counts as single).
inline DegeneracyReport classify_degeneracy(std::array<double, 4> energies,
                                            double tol = kDefaultDegeneracyTol) {
  if (!(tol > 0.0)) fail(ErrorKind::kInvalidParameter, "tolerance must be positive");
  std::sort(energies.begin(), energies.end());
  DegeneracyReport r;
  r.tolerance = tol;
  r.lower_gap = energies[1] - energies[0];
  r.upper_gap = energies[3] - energies[2];
  const double middle = energies[2] - energies[1];
  r.min_gap = std::min({r.lower_gap, middle, r.upper_gap});
  if (r.lower_gap < tol && r.upper_gap < tol)
    r.classification = Degeneracy::kDouble;
  else if (r.min_gap < tol)
    r.classification = Degeneracy::kSingle;
  return r;
}

/// Classifies in parameter units (energies / kEnergyUnit), so `tol` and the
/// reported gaps are dimensionless.
inline DegeneracyReport classify_degeneracy(const EigenSystem& es,
                                            double tol = kDefaultDegeneracyTol) {
  std::array<double, 4> e = es.energies;
  for (double& x : e) x /= kEnergyUnit;
  return classify_degeneracy(e, tol);
}

}  // namespace onestep
