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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/invariants.hpp"
#include "onestep/metrics.hpp"
#include "onestep/nelder_mead.hpp"
#include "onestep/noise.hpp"
#include "onestep/parallel.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

/// One optimization coordinate; it sets every listed control (tied controls
/// share a value).
struct FreeVariable {
  std::string name;
  std::vector<Control> controls;
  double lower = 0.0;
  double upper = 0.0;
};

enum class MatchMode { kExact, kEquivalence };

struct SearchSpec {
  std::vector<FreeVariable> free;
  /// Values of everything not covered by `free`.
  HamiltonianParams base;
  GateTarget target = {"CNOT", Mat4::Identity(), std::nullopt};
  MatchMode match = MatchMode::kExact;
  Degeneracy constraint = Degeneracy::kNone;
  /// When set, (Jx, Jy, Jz) is rescaled to this length before evaluation.
  std::optional<double> coupling_norm;
  double distance_weight = 1.0;
  double purity_weight = 0.0;
  double penalty_weight = 100.0;
  NoiseModel noise;
  int restarts = 16;
  int max_evaluations = 4000;  // per restart
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Converged when the match error (distance or invariant gap) is below this.
  double threshold = 1e-6;
};

inline void validate(const SearchSpec& spec) {
  if (spec.free.empty()) fail(ErrorKind::kInvalidParameter, "no free parameters");
  for (const auto& v : spec.free) {
    if (v.controls.empty())
      fail(ErrorKind::kInvalidParameter, "free variable '" + v.name + "' sets no control");
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper) || v.lower > v.upper)
      fail(ErrorKind::kInvalidParameter, "bounds of '" + v.name + "' must be finite and ordered");
    for (Control c : v.controls)
      if (c == Control::kT0 && v.lower <= 0.0)
        fail(ErrorKind::kInvalidParameter, "t0 bounds must be positive");
  }
  if (spec.coupling_norm && !(*spec.coupling_norm > 0.0))
    fail(ErrorKind::kInvalidParameter, "coupling norm must be positive");
  if (spec.restarts < 1 || spec.max_evaluations < 1)
    fail(ErrorKind::kInvalidParameter, "restart and evaluation budgets must be positive");
  validate(spec.noise);
  validate(spec.base);
}

/// Squared gap of the pair(s) a constraint asks to close, in parameter units.
inline double degeneracy_violation(const DegeneracyReport& r, Degeneracy constraint) {
  switch (constraint) {
    case Degeneracy::kNone: return 0.0;
    case Degeneracy::kSingle: return r.min_gap * r.min_gap;
    case Degeneracy::kDouble: return r.lower_gap * r.lower_gap + r.upper_gap * r.upper_gap;
  }
  return 0.0;
}

struct Evaluation {
  double objective = 0.0;
  double match_error = 0.0;
  double violation = 0.0;
  double purity_loss = 0.0;
};

inline HamiltonianParams apply_point(const SearchSpec& spec, const Point& x) {
  HamiltonianParams p = spec.base;
  for (std::size_t i = 0; i < spec.free.size(); ++i)
    for (Control c : spec.free[i].controls) p[c] = x[i];
  if (spec.coupling_norm) {
    const double n = p.coupling_norm();
    if (n > 0.0) {
      const double s = *spec.coupling_norm / n;
      p.jx *= s;
      p.jy *= s;
      p.jz *= s;
    }
  }
  return p;
}

inline Evaluation evaluate(const SearchSpec& spec, const HamiltonianParams& p) {
  const EigenSystem es = eigensystem(build_hamiltonian(p));
  const Mat4 u = propagator(es, p.t0);
  Evaluation e;
  if (spec.match == MatchMode::kExact) {
    e.match_error = gate_distance(u, spec.target).phase_optimized;
  } else {
    const MakhlinInvariants g = makhlin_invariants(u);
    const MakhlinInvariants goal = spec.target.invariants();
    e.match_error = std::sqrt(std::norm(g.g1 - goal.g1) + std::norm(g.g2 - goal.g2));
  }
  e.violation = degeneracy_violation(classify_degeneracy(es), spec.constraint);
  if (spec.purity_weight > 0.0) {
    PropagationOptions opt;
    opt.samples = 1;
    opt.verify_halving = false;
    opt.validate_states = false;
    e.purity_loss = gate_purity(p, spec.noise, opt).final_loss();
  }
  e.objective = spec.distance_weight * e.match_error * e.match_error +
                spec.purity_weight * e.purity_loss + spec.penalty_weight * e.violation;
  return e;
}

struct OptimizeResult {
  HamiltonianParams best;
  GateReport report;
  Evaluation evaluation;
  bool converged = false;
  /// Best objective after each restart, in restart order (non-increasing).
  std::vector<double> best_by_restart;
  std::vector<double> restart_objectives;
  int evaluations = 0;
};

/// Nelder-Mead from `restarts` seeded Halton starting points; restarts run
/// concurrently and are combined in index order.
inline OptimizeResult optimize(const SearchSpec& spec) {
  validate(spec);
  Box box;
  for (const auto& v : spec.free) {
    box.lower.push_back(v.lower);
    box.upper.push_back(v.upper);
  }
  const auto starts = halton_points(box, static_cast<std::size_t>(spec.restarts), spec.seed);
  const Objective f = [&](const Point& x) {
    try {
      return evaluate(spec, apply_point(spec, x)).objective;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  NelderMeadOptions nm;
  nm.max_evaluations = spec.max_evaluations;
  if (spec.purity_weight == 0.0) nm.f_target = 1e-4 * spec.threshold * spec.threshold;

  std::vector<NelderMeadResult> runs(starts.size());
  parallel_for(starts.size(), spec.threads,
               [&](std::size_t i) { runs[i] = nelder_mead(f, starts[i], box, nm); });

  OptimizeResult out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out.evaluations += runs[i].evaluations;
    out.restart_objectives.push_back(runs[i].f);
    if (runs[i].f < runs[best].f) best = i;
    out.best_by_restart.push_back(runs[best].f);
  }
  out.best = apply_point(spec, runs[best].x);
  out.evaluation = evaluate(spec, out.best);
  out.report = report(out.best, spec.target, spec.noise);
  out.converged = out.evaluation.match_error < spec.threshold &&
                  std::sqrt(out.evaluation.violation) < 1e-6;
  return out;
}

}  // namespace onestep
