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
#include "onestep/gates.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/invariants.hpp"
#include "onestep/linalg.hpp"
#include "onestep/nelder_mead.hpp"
#include "onestep/pulse.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

// ---------------------------------------------------------------------------
// Matrix-logarithm family of CNOT generators.

/// Selects one branch of i ln(CNOT): integers n1, n2, n3 pick the 2π shifts,
/// phi0 the global phase and (phi, phi1) the rotation C commuting with CNOT.
struct LogBranch {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  double phi0 = 0.0;
  std::array<double, 3> phi{0.0, 0.0, 0.0};
  double phi1 = 0.0;
};

struct LogParts {
  Mat4 a;
  Mat4 b;
  Mat4 c;
};

inline LogParts cnot_log_parts(const LogBranch& br) {
  LogParts p;
  p.a = Mat4::Zero();
  p.a.block<2, 2>(2, 2) << -kPi / 2, kPi / 2, kPi / 2, -kPi / 2;
  p.a += br.phi0 * Mat4::Identity();

  const Mat2 ones = Mat2::Ones();
  p.b = Mat4::Zero();
  p.b.block<2, 2>(0, 0) = 2 * kPi * br.n1 * ones;
  p.b.block<2, 2>(2, 2) = 2 * kPi * br.n1 * ones;
  p.b.block<2, 2>(0, 2) = 2 * kPi * br.n2 * ones;
  p.b.block<2, 2>(2, 0) = 2 * kPi * br.n2 * ones;
  p.b += 2 * kPi * br.n3 * Mat4::Identity();

  const Mat2 g = br.phi[0] * pauli(Axis::kX) + br.phi[1] * pauli(Axis::kY) +
                 br.phi[2] * pauli(Axis::kZ);
  Mat4 embed = Mat4::Zero();
  embed.block<2, 2>(0, 0) = g;
  embed.block<2, 2>(2, 2) = br.phi1 * pauli(Axis::kX);
  // exp(i g) via the Hermitian propagator with t = -1
  p.c = propagator(embed, -1.0);
  return p;
}

/// Hermitian H = C (A + B) C† / t0 with exp(-i t0 H) = e^{-i phi0} CNOT.
inline Mat4 cnot_log_family(const LogBranch& br, double t0) {
  if (!(t0 > 0.0)) fail(ErrorKind::kInvalidParameter, "t0 must be positive");
  const LogParts p = cnot_log_parts(br);
  Mat4 h = p.c * (p.a + p.b) * p.c.adjoint() / t0;
  return 0.5 * (h + h.adjoint());
}

// ---------------------------------------------------------------------------
// One-step constructions.

struct OneStepConstruction {
  std::string name;
  HamiltonianParams params;
  /// e^{i global_phase} exp(-i t0 H) = target (exact constructions only).
  double global_phase = 0.0;
  Degeneracy expected = Degeneracy::kNone;
  std::string target;
};

/// Δ2 = 1.5, ε1 = -0.25, ε2 = Jz = -√7/4 (refined) or -0.66 (rounded), all
/// other couplings zero, t0 = 1.
inline OneStepConstruction onestep_cnot(bool refined = true) {
  OneStepConstruction c;
  c.name = refined ? "cnot_refined" : "cnot_printed";
  c.params.delta2 = 1.5;
  c.params.eps1 = -0.25;
  const double v = refined ? -std::sqrt(7.0) / 4.0 : -0.66;
  c.params.eps2 = v;
  c.params.jz = v;
  c.global_phase = -kPi / 4;
  c.expected = Degeneracy::kSingle;
  c.target = "CNOT";
  return c;
}

enum class BGateVariant { kPrinted, kProjected, kReoptimized };

inline std::string_view to_string(BGateVariant v) {
  switch (v) {
    case BGateVariant::kPrinted: return "printed";
    case BGateVariant::kProjected: return "projected";
    case BGateVariant::kReoptimized: return "reoptimized";
  }
  return "?";
}

/// Result of re-optimizing (Jy, t0) with Jz = Δ²/Jy held on the double
/// degeneracy manifold, starting from Jy = 0.58, t0 = 1.
inline constexpr double kBGateJy = 0.64359425444793383;
inline constexpr double kBGateT0 = 1.0808384195610317;

/// Identical qubits Δ = 1 at their optimal points, Jx = 0.
///   printed:     Jy = 0.58, Jz = 1.71, t0 = 1
///   projected:   Jy = 0.58, Jz = 1/0.58, t0 = 1
///   reoptimized: Jy = kBGateJy, Jz = 1/Jy, t0 = kBGateT0
inline OneStepConstruction onestep_bgate(BGateVariant v = BGateVariant::kReoptimized) {
  OneStepConstruction c;
  c.name = "bgate_" + std::string(to_string(v));
  c.params.delta1 = c.params.delta2 = 1.0;
  c.target = "B";
  c.expected = Degeneracy::kDouble;
  switch (v) {
    case BGateVariant::kPrinted:
      c.params.jy = 0.58;
      c.params.jz = 1.71;
      break;
    case BGateVariant::kProjected:
      c.params.jy = 0.58;
      c.params.jz = 1.0 / 0.58;
      break;
    case BGateVariant::kReoptimized:
      c.params.jy = kBGateJy;
      c.params.jz = 1.0 / kBGateJy;
      c.params.t0 = kBGateT0;
      break;
  }
  return c;
}

/// Local search over (Jy, t0) on the manifold Jz = Δ²/Jy for a point whose
/// invariants match `target`. Returns the refined parameters.
inline HamiltonianParams refine_on_double_manifold(HamiltonianParams start,
                                                   const GateTarget& target) {
  const double d2 = start.delta1 * start.delta2;
  if (!(d2 > 0.0)) fail(ErrorKind::kDomain, "manifold refinement needs Δ1Δ2 > 0");
  const MakhlinInvariants goal = target.invariants();
  auto at = [&](const Point& x) {
    HamiltonianParams p = start;
    p.jy = x[0];
    p.jz = d2 / x[0];
    p.t0 = x[1];
    return p;
  };
  const Objective f = [&](const Point& x) {
    const MakhlinInvariants g = makhlin_invariants(evolution(at(x)));
    return std::norm(g.g1 - goal.g1) + std::norm(g.g2 - goal.g2);
  };
  const Box box{{0.5 * start.jy, 0.5 * start.t0}, {2.0 * start.jy, 2.0 * start.t0}};
  NelderMeadOptions opt;
  opt.initial_step = 0.005;
  opt.x_tol = 1e-14;
  opt.f_tol = 1e-30;
  opt.polish_restarts = 4;
  return at(nelder_mead(f, {start.jy, start.t0}, box, opt).x);
}

// ---------------------------------------------------------------------------
// CNOT class from one coupling pulse on the double-degeneracy manifold.

enum class CouplingSigns { kCorrected, kPrinted };

struct CnotClassPulse {
  HamiltonianParams params;  // t0 is the landing time
  MakhlinInvariants invariants;
  /// max(|G1 - 0|, |G2 - 1|) at the landing time.
  double residual = 0.0;
};

/// Identical qubits Δ at ε = 0 with J⃗ = (0, Jy, Jz),
///   Jy = (√(J²+Δ²) + √(J²−Δ²))/√2,  Jz = (√(J²+Δ²) − √(J²−Δ²))/√2
/// (kPrinted uses the minus sign in both). The duration is the first time at
/// which G2 reaches the CNOT-class value 1, located by scan and bisection.
inline CnotClassPulse cnot_class_pulse(double j, double delta,
                                       CouplingSigns signs = CouplingSigns::kCorrected) {
  if (!(delta > 0.0) || !(j >= delta) || !std::isfinite(j))
    fail(ErrorKind::kDomain, "cnot_class_pulse needs J >= Δ > 0");
  const double s = std::sqrt(j * j + delta * delta);
  const double d = std::sqrt(j * j - delta * delta);
  CnotClassPulse out;
  HamiltonianParams& p = out.params;
  p.delta1 = p.delta2 = delta;
  p.jy = (signs == CouplingSigns::kCorrected ? s + d : s - d) / std::sqrt(2.0);
  p.jz = (s - d) / std::sqrt(2.0);

  const EigenSystem es = eigensystem(build_hamiltonian(p));
  auto excess = [&](double t) {
    return makhlin_invariants(propagator(es, t)).g2.real() - 1.0;
  };
  const double omega = std::max(std::abs(es.energies[0]), std::abs(es.energies[3]));
  const double t_max = 2.0 * kPi / omega;
  const int n = 4000;
  double lo = 0.0, hi = -1.0;
  for (int i = 1; i <= n; ++i) {
    const double t = t_max * i / n;
    if (excess(t) <= 0.0) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (hi < 0.0) fail(ErrorKind::kNonConvergence, "G2 never reaches the CNOT-class value");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  p.t0 = 0.5 * (lo + hi);
  out.invariants = makhlin_invariants(propagator(es, p.t0));
  out.residual = invariant_gap(out.invariants, MakhlinInvariants{0.0, 1.0});
  return out;
}

// ---------------------------------------------------------------------------
// Five-pulse reference protocol.

/// Five non-overlapping pulses realizing CNOT (control qubit 1), applied in
/// time order:
///   π/2 about (σˣ₂+σᶻ₂)/√2, π/4 about σᶻ₁σᶻ₂, −π/4 about σᶻ₂,
///   −π/4 about σᶻ₁, π/2 about (σˣ₂+σᶻ₂)/√2,
/// where "θ about G" is exp(−iθG) for a unit-norm G. Every pulse runs at
/// generator norm `amplitude_bound` (rad per unit time), so its duration is
/// |θ| / amplitude_bound.
inline PulseSequence standard_cnot_protocol(double amplitude_bound) {
  if (!(amplitude_bound > 0.0) || !std::isfinite(amplitude_bound))
    fail(ErrorKind::kInvalidParameter, "amplitude bound must be positive");
  const Mat4 hadamard_axis =
      (pauli_tensor(Axis::kI, Axis::kX) + pauli_tensor(Axis::kI, Axis::kZ)) / std::sqrt(2.0);
  const struct {
    Mat4 axis;
    double angle;
    const char* label;
  } pulses[] = {
      {hadamard_axis, kPi / 2, "H2"},
      {pauli_tensor(Axis::kZ, Axis::kZ), kPi / 4, "ZZ"},
      {pauli_tensor(Axis::kI, Axis::kZ), -kPi / 4, "Z2"},
      {pauli_tensor(Axis::kZ, Axis::kI), -kPi / 4, "Z1"},
      {hadamard_axis, kPi / 2, "H2"},
  };
  PulseSequence seq;
  seq.amplitude_bound = amplitude_bound;
  for (const auto& pulse : pulses) {
    const double sign = pulse.angle < 0 ? -1.0 : 1.0;
    seq.steps.push_back(
        {sign * amplitude_bound * pulse.axis, std::abs(pulse.angle) / amplitude_bound, pulse.label});
  }
  return seq;
}

/// Amplitude bound matching the one-step CNOT: its generator spectral norm.
inline double onestep_cnot_amplitude(bool refined = true) {
  return spectral_norm(build_hamiltonian(onestep_cnot(refined).params));
}

}  // namespace onestep
