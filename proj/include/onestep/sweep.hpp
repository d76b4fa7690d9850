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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "onestep/dynamics.hpp"
#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/noise.hpp"
#include "onestep/parallel.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

struct Axis1D {
  Control control = Control::kJy;
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  double at(int i) const {
    return points == 1 ? min : min + (max - min) * i / (points - 1);
  }
  double spacing() const { return points > 1 ? (max - min) / (points - 1) : 0.0; }
};

/// Two swept controls over a rectangular grid. With coupling_norm set, the
/// closure control is fixed to +√(J² − (other couplings)²); cells where that
/// is imaginary are infeasible.
struct SweepGrid {
  Axis1D x{Control::kJy, -2.0, 2.0, 41};
  Axis1D y{Control::kJz, -2.0, 2.0, 41};
  HamiltonianParams base;
  std::optional<double> coupling_norm;
  Control closure = Control::kJx;
  /// Classification tolerance in parameter units; 0 selects the larger grid
  /// spacing.
  double degeneracy_tol = 0.0;

  double effective_tol() const {
    if (degeneracy_tol > 0.0) return degeneracy_tol;
    const double s = std::max(x.spacing(), y.spacing());
    return s > 0.0 ? s : kDefaultDegeneracyTol;
  }
};

inline bool is_coupling(Control c) {
  return c == Control::kJx || c == Control::kJy || c == Control::kJz;
}

inline void validate(const SweepGrid& g) {
  for (const Axis1D* a : {&g.x, &g.y}) {
    if (a->points < 1) fail(ErrorKind::kInvalidParameter, "grid axis needs at least one point");
    if (!std::isfinite(a->min) || !std::isfinite(a->max) || a->min > a->max)
      fail(ErrorKind::kInvalidParameter, "grid ranges must be finite and ordered");
  }
  if (g.x.control == g.y.control)
    fail(ErrorKind::kInvalidParameter, "swept controls must differ");
  if (g.coupling_norm) {
    if (!(*g.coupling_norm > 0.0)) fail(ErrorKind::kInvalidParameter, "coupling norm must be positive");
    if (!is_coupling(g.closure) || g.closure == g.x.control || g.closure == g.y.control)
      fail(ErrorKind::kInvalidParameter, "closure must be a coupling not being swept");
  }
  validate(g.base);
}

struct SweepCell {
  double x = 0.0;
  double y = 0.0;
  bool feasible = false;
  double decay_rate = std::numeric_limits<double>::quiet_NaN();  // |dP/dt| at t = 0
  Degeneracy classification = Degeneracy::kNone;
  double min_gap = std::numeric_limits<double>::quiet_NaN();
  double double_gap = std::numeric_limits<double>::quiet_NaN();
  std::string reason;
  HamiltonianParams params;
};

struct SweepResult {
  SweepGrid grid;
  /// Row-major in x: cell (i, j) is cells[i * y.points + j].
  std::vector<SweepCell> cells;
};

inline SweepCell sweep_cell(const SweepGrid& g, const NoiseModel& nm, int i, int j) {
  SweepCell c;
  c.x = g.x.at(i);
  c.y = g.y.at(j);
  HamiltonianParams p = g.base;
  p[g.x.control] = c.x;
  p[g.y.control] = c.y;
  if (g.coupling_norm) {
    double rest = (*g.coupling_norm) * (*g.coupling_norm);
    for (Control k : {Control::kJx, Control::kJy, Control::kJz})
      if (k != g.closure) rest -= p[k] * p[k];
    if (rest < -1e-12) {
      c.reason = "coupling norm exceeded";
      c.params = p;
      return c;
    }
    p[g.closure] = std::sqrt(std::max(0.0, rest));
  }
  c.params = p;
  try {
    const OpenSystem sys = make_open_system(build_hamiltonian(p), nm);
    const DegeneracyReport d = classify_degeneracy(sys.eigen, g.effective_tol());
    c.decay_rate = std::abs(initial_purity_slope(sys));
    c.classification = d.classification;
    c.min_gap = d.min_gap;
    c.double_gap = d.double_gap();
    c.feasible = true;
  } catch (const Error& e) {
    c.reason = e.what();
  }
  return c;
}

/// Evaluates every cell independently; the output order never depends on the
/// thread count.
inline SweepResult sweep(const SweepGrid& g, const NoiseModel& nm, unsigned threads = 0) {
  validate(g);
  validate(nm);
  SweepResult r;
  r.grid = g;
  const int nx = g.x.points, ny = g.y.points;
  r.cells.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  parallel_for(r.cells.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k) / ny, j = static_cast<int>(k) % ny;
    r.cells[k] = sweep_cell(g, nm, i, j);
  });
  return r;
}

/// Grid of the purity-decay landscape at fixed |J|: Δ1 = Δ2 = 1, ε = 0,
/// (Jy, Jz) ∈ [-2, 2]² on 41 × 41 points, Jx closing |J| = 2.
inline SweepGrid landscape_grid() {
  SweepGrid g;
  g.base.delta1 = g.base.delta2 = 1.0;
  g.coupling_norm = 2.0;
  return g;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LandscapeSummary {
  std::vector<std::size_t> argmin_cells;       // minimal decay rate
  std::vector<std::size_t> min_double_cells;   // minimal double gap
  bool argmin_in_double_set = false;
  double min_rate = 0.0;
  double single_median = 0.0;
  double none_median = 0.0;
  std::size_t single_count = 0;
  std::size_t none_count = 0;
};

/// Locates the minimal-rate and minimal-double-gap cells (ties within a
/// relative 1e-9) and the medians of singly and non-degenerate cells.
inline LandscapeSummary summarize_landscape(const SweepResult& r) {
  LandscapeSummary s;
  double min_rate = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& c : r.cells) {
    if (!c.feasible) continue;
    min_rate = std::min(min_rate, c.decay_rate);
    min_gap = std::min(min_gap, c.double_gap);
  }
  s.min_rate = min_rate;
  std::vector<double> singles, nones;
  for (std::size_t k = 0; k < r.cells.size(); ++k) {
    const auto& c = r.cells[k];
    if (!c.feasible) continue;
    if (c.decay_rate <= min_rate * (1 + 1e-9) + 1e-300) s.argmin_cells.push_back(k);
    if (c.double_gap <= min_gap * (1 + 1e-9) + 1e-12) s.min_double_cells.push_back(k);
    if (c.classification == Degeneracy::kSingle) singles.push_back(c.decay_rate);
    if (c.classification == Degeneracy::kNone) nones.push_back(c.decay_rate);
  }
  s.argmin_in_double_set = !s.argmin_cells.empty() &&
      std::all_of(s.argmin_cells.begin(), s.argmin_cells.end(), [&](std::size_t k) {
        return std::find(s.min_double_cells.begin(), s.min_double_cells.end(), k) !=
               s.min_double_cells.end();
      });
  s.single_count = singles.size();
  s.none_count = nones.size();
  s.single_median = median(singles);
  s.none_median = median(nones);
  return s;
}

}  // namespace onestep
