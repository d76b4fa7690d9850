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

#include "onestep/dynamics.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/invariants.hpp"
#include "onestep/noise.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

struct GateReport {
  std::string target;
  double raw_distance = 0.0;
  double distance = 0.0;  // phase optimized
  double global_phase = 0.0;
  double fidelity = 0.0;  // average gate fidelity
  MakhlinInvariants invariants;
  MakhlinInvariants target_invariants;
  double invariant_gap = 0.0;
  bool equivalent = false;
  double purity_loss = 0.0;  // 1 - P(t0)
  double decay_rate = 0.0;   // |dP/dt| at t = 0
  DegeneracyReport degeneracy;
};

/// Coherent part only: distance, invariants and degeneracy of exp(-i t0 H).
inline GateReport coherent_report(const HamiltonianParams& p, const GateTarget& target,
                                  double degeneracy_tol = kDefaultDegeneracyTol) {
  const Mat4 h = build_hamiltonian(p);
  const EigenSystem es = eigensystem(h);
  const Mat4 u = propagator(es, p.t0);
  GateReport r;
  r.target = target.name;
  const GateDistance d = gate_distance(u, target);
  r.raw_distance = d.raw;
  r.distance = d.phase_optimized;
  r.global_phase = d.phase;
  r.fidelity = average_gate_fidelity(u, target.matrix);
  r.invariants = makhlin_invariants(u);
  r.target_invariants = target.invariants();
  r.invariant_gap = invariant_gap(r.invariants, r.target_invariants);
  r.equivalent = is_equivalent(u, target);
  r.degeneracy = classify_degeneracy(es, degeneracy_tol);
  return r;
}

/// Full record: coherent quantities plus the purity loss of the noisy pulse
/// at t0 and the initial purity-decay rate.
inline GateReport report(HamiltonianParams p, const GateTarget& target, const NoiseModel& nm,
                         double t0, PropagationOptions opt = {}) {
  p.t0 = t0;
  GateReport r = coherent_report(p, target);
  opt.samples = std::max(1, opt.samples);
  const PurityTrace trace = gate_purity(p, nm, t0, opt);
  r.purity_loss = trace.final_loss();
  r.decay_rate = trace.decay_rate();
  return r;
}

inline GateReport report(const HamiltonianParams& p, const GateTarget& target,
                         const NoiseModel& nm) {
  return report(p, target, nm, p.t0);
}

}  // namespace onestep
