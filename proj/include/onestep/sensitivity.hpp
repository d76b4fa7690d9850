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

#include <cmath>
#include <limits>
#include <vector>

#include "onestep/dynamics.hpp"
#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/noise.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

/// 1 − (1/16) Σ_j |⟨ψ_j| U₀† U |ψ_j⟩|² over the 16 probe states.
inline double state_averaged_infidelity(const Mat4& u, const Mat4& reference) {
  const Mat4 w = reference.adjoint() * u;
  double sum = 0.0;
  for (const Vec4& k : initial_kets()) sum += std::norm(k.dot(w * k));
  return 1.0 - sum / 16.0;
}

/// Infidelity of the pulse with one control scaled by (1 + rel) against the
/// undetuned pulse.
inline double detuned_infidelity(const HamiltonianParams& p, Control c, double rel,
                                 const Mat4& reference) {
  HamiltonianParams q = p;
  q[c] *= 1.0 + rel;
  return state_averaged_infidelity(evolution(q), reference);
}

inline double detuned_infidelity(const HamiltonianParams& p, Control c, double rel) {
  return detuned_infidelity(p, c, rel, evolution(p));
}

/// Same, with every nonzero control scaled together.
inline double joint_detuned_infidelity(const HamiltonianParams& p, double rel,
                                       const Mat4& reference) {
  HamiltonianParams q = p;
  for (Control c : kHamiltonianControls) q[c] *= 1.0 + rel;
  return state_averaged_infidelity(evolution(q), reference);
}

struct ControlSensitivity {
  Control control = Control::kDelta1;
  double value = 0.0;
  /// e(δ) ≈ linear·δ + quadratic·δ², δ relative detuning.
  double linear = 0.0;
  double quadratic = 0.0;
  /// Relative detuning at which the quadratic model reaches the budget.
  double radius = std::numeric_limits<double>::infinity();
  /// Same expansion for the noisy purity loss 1 − P(t0).
  double loss_linear = 0.0;
  double loss_quadratic = 0.0;
};

struct SensitivityReport {
  double budget = 0.0;
  double step = 0.0;
  std::vector<ControlSensitivity> controls;
  double radius = std::numeric_limits<double>::infinity();  // min over controls
  Control limiting = Control::kDelta1;
  double joint_quadratic = 0.0;
  double joint_radius = std::numeric_limits<double>::infinity();
  double base_loss = 0.0;
  /// Some linear term is not negligible at the radius: not an optimum.
  bool non_optimal = false;
};

/// Central differences in the relative detuning of each nonzero control. The
/// tolerance radius uses the coherent infidelity against `reference`, which is
/// quadratic when p realizes it; a linear term flags p as non-optimal.
inline SensitivityReport sensitivity(const HamiltonianParams& p, const Mat4& reference,
                                     const NoiseModel& nm, double budget,
                                     double step = 1e-3) {
  if (!(budget > 0.0)) fail(ErrorKind::kInvalidParameter, "budget must be positive");
  if (!(step > 0.0)) fail(ErrorKind::kInvalidParameter, "step must be positive");
  validate(p);
  validate(nm);
  SensitivityReport r;
  r.budget = budget;
  r.step = step;

  PropagationOptions opt;
  opt.samples = 1;
  auto loss = [&](const HamiltonianParams& q) {
    return gate_purity(q, nm, opt).final_loss();
  };
  r.base_loss = loss(p);

  for (Control c : kHamiltonianControls) {
    if (p[c] == 0.0) continue;
    ControlSensitivity s;
    s.control = c;
    s.value = p[c];
    const double e0 = detuned_infidelity(p, c, 0.0, reference);
    const double ep = detuned_infidelity(p, c, step, reference);
    const double em = detuned_infidelity(p, c, -step, reference);
    s.linear = (ep - em) / (2 * step);
    s.quadratic = (ep + em - 2 * e0) / (2 * step * step);
    if (s.quadratic > 0.0) s.radius = std::sqrt(budget / s.quadratic);

    HamiltonianParams qp = p, qm = p;
    qp[c] *= 1 + step;
    qm[c] *= 1 - step;
    const double lp = loss(qp), lm = loss(qm);
    s.loss_linear = (lp - lm) / (2 * step);
    s.loss_quadratic = (lp + lm - 2 * r.base_loss) / (2 * step * step);

    if (std::isfinite(s.radius) &&
        std::abs(s.linear) * s.radius > 1e-3 * s.quadratic * s.radius * s.radius)
      r.non_optimal = true;
    if (s.radius < r.radius) {
      r.radius = s.radius;
      r.limiting = c;
    }
    r.controls.push_back(s);
  }
  const double j0 = joint_detuned_infidelity(p, 0.0, reference);
  const double jp = joint_detuned_infidelity(p, step, reference);
  const double jm = joint_detuned_infidelity(p, -step, reference);
  r.joint_quadratic = (jp + jm - 2 * j0) / (2 * step * step);
  if (r.joint_quadratic > 0.0) r.joint_radius = std::sqrt(budget / r.joint_quadratic);
  return r;
}

/// Against the undetuned pulse itself.
inline SensitivityReport sensitivity(const HamiltonianParams& p, const NoiseModel& nm,
                                     double budget, double step = 1e-3) {
  return sensitivity(p, evolution(p), nm, budget, step);
}

}  // namespace onestep
