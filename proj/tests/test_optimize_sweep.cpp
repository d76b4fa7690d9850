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

#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "onestep/onestep.hpp"
#include "oracles.hpp"

using namespace onestep;

namespace {

SearchSpec cnot_recovery_spec() {
  SearchSpec s;
  s.base = onestep_cnot().params;
  s.free = {{"delta2", {Control::kDelta2}, 1.2, 1.8},
            {"eps1", {Control::kEps1}, -0.5, 0.0},
            {"eps2_jz", {Control::kEps2, Control::kJz}, -0.9, -0.4}};
  s.target = target_gate("CNOT");
  s.constraint = Degeneracy::kSingle;
  s.restarts = 8;
  s.seed = 7;
  return s;
}

SearchSpec manifold_spec(const char* target) {
  SearchSpec s;
  s.free = {{"delta", {Control::kDelta1, Control::kDelta2}, 0.2, 2.0},
            {"jy", {Control::kJy}, 0.2, 3.0},
            {"jz", {Control::kJz}, 0.2, 3.0},
            {"t0", {Control::kT0}, 0.1, 3.0}};
  s.target = target_gate(target);
  s.match = MatchMode::kEquivalence;
  s.constraint = Degeneracy::kDouble;
  s.restarts = 8;
  s.seed = 3;
  return s;
}

bool same_cells(const SweepResult& a, const SweepResult& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const SweepCell &x = a.cells[k], &y = b.cells[k];
    auto eq = [](double u, double v) { return (std::isnan(u) && std::isnan(v)) || u == v; };
    if (x.feasible != y.feasible || !eq(x.decay_rate, y.decay_rate) ||
        x.classification != y.classification || !eq(x.min_gap, y.min_gap) ||
        !eq(x.double_gap, y.double_gap) || x.reason != y.reason || !(x.params == y.params))
      return false;
  }
  return true;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  const Objective f = [](const Point& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_evaluations = 20000;
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, {{-2, -2}, {2, 2}}, opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  EXPECT_LT(r.f, 1e-12);
  EXPECT_LE(r.evaluations, 20000);
}

TEST(NelderMead, RespectsBoxAndTarget) {
  const Objective f = [](const Point& x) { return (x[0] - 5) * (x[0] - 5); };
  const NelderMeadResult r = nelder_mead(f, {0.0}, {{-1}, {1}});
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  NelderMeadOptions opt;
  opt.f_target = 20.0;
  const NelderMeadResult early = nelder_mead(f, {0.0}, {{-1}, {1}}, opt);
  EXPECT_LT(early.f, 20.0);
  EXPECT_LT(early.evaluations, r.evaluations);
}

TEST(NelderMead, BadBox) {
  EXPECT_THROW(validate(Box{{1.0}, {0.0}}), Error);
  EXPECT_THROW(validate(Box{{}, {}}), Error);
  EXPECT_THROW(validate(Box{{0.0}, {std::numeric_limits<double>::infinity()}}), Error);
}

TEST(Halton, RadicalInverseAndShift) {
  EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(radical_inverse(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(radical_inverse(4, 3), 4.0 / 9.0);
  const Box box{{-1, 0, 2}, {1, 5, 3}};
  const auto a = halton_points(box, 50, 9), b = halton_points(box, 50, 9);
  const auto c = halton_points(box, 50, 10);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const Point& p : a)
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GE(p[i], box.lower[i]);
      EXPECT_LT(p[i], box.upper[i]);
    }
  EXPECT_THROW(halton_points(Box{Point(13, 0.0), Point(13, 1.0)}, 1, 1), Error);
}

TEST(Halton, PortableUnitDouble) {
  std::mt19937_64 rng(5489);
  // first raw output of mt19937_64 with the default seed, mapped to [0, 1)
  EXPECT_EQ(unit_double(rng), static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST(Parallel, MatchesSerialAndRethrows) {
  std::vector<double> serial(1000), threaded(1000);
  auto work = [](std::size_t i) { return std::sin(static_cast<double>(i)) * i; };
  parallel_for(serial.size(), 1, [&](std::size_t i) { serial[i] = work(i); });
  parallel_for(threaded.size(), 8, [&](std::size_t i) { threaded[i] = work(i); });
  EXPECT_EQ(serial, threaded);
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) fail(ErrorKind::kDomain, "boom");
                            }),
               Error);
  std::atomic<int> count{0};
  parallel_for(0, 4, [&](std::size_t) { ++count; });
  EXPECT_EQ(count.load(), 0);
  EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Optimize, RecoversOneStepCnot) {
  const OptimizeResult r = optimize(cnot_recovery_spec());
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.report.distance, 1e-6);
  EXPECT_EQ(r.report.degeneracy.classification, Degeneracy::kSingle);
  const double ref = std::abs(initial_purity_slope(onestep_cnot().params, NoiseModel{}));
  EXPECT_NEAR(r.report.decay_rate, ref, 0.1 * ref);
}

TEST(Optimize, HeisenbergSwap) {
  SearchSpec s;
  s.free = {{"j", {Control::kJx, Control::kJy, Control::kJz}, 0.05, 0.6}};
  s.target = target_gate("SWAP");
  s.restarts = 4;
  const OptimizeResult r = optimize(s);
  EXPECT_TRUE(r.converged);
  // exp(-iπJ σ⃗·σ⃗) is SWAP up to phase at J = 1/4
  EXPECT_NEAR(r.best.jx, 0.25, 1e-6);
  EXPECT_EQ(r.best.jx, r.best.jy);
  EXPECT_EQ(r.best.jy, r.best.jz);
  EXPECT_EQ(r.best.delta1, 0.0);
  using namespace oracle;
  const Mat4 dot = tensor(sx(), sx()) + tensor(sy(), sy()) + tensor(sz(), sz());
  EXPECT_LT(gate_distance(expm<4>(Complex(0, -kPi * r.best.jx) * dot), swap_matrix())
                .phase_optimized,
            1e-5);
}

TEST(Optimize, SqrtSwapIncompatibleWithDoubleDegeneracy) {
  const OptimizeResult r = optimize(manifold_spec("SQRT_SWAP"));
  EXPECT_FALSE(r.converged);
  EXPECT_GE(r.report.invariant_gap, 0.1);
}

TEST(Optimize, DoubleConstraintPenaltyConsistency) {
  const OptimizeResult r = optimize(manifold_spec("B"));
  EXPECT_TRUE(r.converged);
  const DegeneracyReport d = classify_degeneracy(eigensystem(build_hamiltonian(r.best)));
  EXPECT_LT(d.double_gap(), 1e-6);
  EXPECT_LT(r.report.invariant_gap, 1e-6);
}

TEST(Optimize, DeterministicAcrossRunsAndThreads) {
  SearchSpec s = cnot_recovery_spec();
  s.threads = 1;
  const OptimizeResult a = optimize(s);
  const OptimizeResult b = optimize(s);
  s.threads = 4;
  const OptimizeResult c = optimize(s);
  EXPECT_TRUE(a.best == b.best);
  EXPECT_TRUE(a.best == c.best);
  EXPECT_EQ(a.evaluation.objective, c.evaluation.objective);
  EXPECT_EQ(a.restart_objectives, c.restart_objectives);
  EXPECT_EQ(a.evaluations, c.evaluations);
}

TEST(Optimize, BestObjectiveNonIncreasingOverRestarts) {
  const OptimizeResult r = optimize(manifold_spec("SQRT_SWAP"));
  ASSERT_EQ(r.best_by_restart.size(), 8u);
  for (std::size_t i = 1; i < r.best_by_restart.size(); ++i)
    EXPECT_LE(r.best_by_restart[i], r.best_by_restart[i - 1]);
  EXPECT_EQ(r.best_by_restart.back(),
            *std::min_element(r.restart_objectives.begin(), r.restart_objectives.end()));
}

TEST(Optimize, ViolationMeasures) {
  DegeneracyReport r;
  r.min_gap = 0.1;
  r.lower_gap = 0.3;
  r.upper_gap = 0.4;
  EXPECT_EQ(degeneracy_violation(r, Degeneracy::kNone), 0.0);
  EXPECT_DOUBLE_EQ(degeneracy_violation(r, Degeneracy::kSingle), 0.01);
  EXPECT_DOUBLE_EQ(degeneracy_violation(r, Degeneracy::kDouble), 0.25);
}

TEST(Optimize, CouplingNormIsImposed) {
  SearchSpec s;
  s.free = {{"jy", {Control::kJy}, 0.1, 1.0}};
  s.base.jx = 1.0;
  s.coupling_norm = 2.0;
  const HamiltonianParams p = apply_point(s, {0.5});
  EXPECT_NEAR(p.coupling_norm(), 2.0, 1e-14);
  EXPECT_NEAR(p.jy / p.jx, 0.5, 1e-14);
}

TEST(Optimize, SpecValidation) {
  SearchSpec s;
  EXPECT_THROW(optimize(s), Error);
  s.free = {{"x", {Control::kJx}, 1.0, 0.0}};
  EXPECT_THROW(optimize(s), Error);
  s.free = {{"t", {Control::kT0}, 0.0, 1.0}};
  EXPECT_THROW(optimize(s), Error);
  s.free = {{"x", {}, 0.0, 1.0}};
  EXPECT_THROW(optimize(s), Error);
}

TEST(Sweep, ZeroNoiseIsZero) {
  SweepGrid g = landscape_grid();
  g.x.points = g.y.points = 11;
  NoiseModel nm;
  nm.alpha = 0.0;
  const SweepResult r = sweep(g, nm);
  int feasible = 0;
  for (const auto& c : r.cells)
    if (c.feasible) {
      ++feasible;
      EXPECT_EQ(c.decay_rate, 0.0) << c.params.jy << ' ' << c.params.jz;
    }
  EXPECT_GT(feasible, 0);
}

TEST(Sweep, SingleCellGrid) {
  SweepGrid g;
  g.base.delta1 = g.base.delta2 = 1.0;
  g.x = {Control::kJy, 1.0, 1.0, 1};
  g.y = {Control::kJz, 1.0, 1.0, 1};
  const SweepResult r = sweep(g, NoiseModel{});
  ASSERT_EQ(r.cells.size(), 1u);
  const SweepCell& c = r.cells[0];
  EXPECT_TRUE(c.feasible);
  EXPECT_EQ(c.classification, Degeneracy::kDouble);
  HamiltonianParams p = g.base;
  p.jy = p.jz = 1.0;
  EXPECT_EQ(c.decay_rate, std::abs(initial_purity_slope(p, NoiseModel{})));
}

TEST(Sweep, InfeasibleCellsAreMarked) {
  SweepGrid g = landscape_grid();
  g.x.points = g.y.points = 5;
  const SweepResult r = sweep(g, NoiseModel{});
  const SweepCell& corner = r.cells[0];  // Jy = Jz = -2, |J| = 2
  EXPECT_FALSE(corner.feasible);
  EXPECT_EQ(corner.reason, "coupling norm exceeded");
  EXPECT_TRUE(std::isnan(corner.decay_rate));
  const SweepCell& centre = r.cells[12];
  EXPECT_TRUE(centre.feasible);
  EXPECT_NEAR(centre.params.jx, 2.0, 1e-15);
}

TEST(Sweep, SerialAndParallelIdentical) {
  SweepGrid g = landscape_grid();
  g.x.points = g.y.points = 21;
  const SweepResult a = sweep(g, NoiseModel{}, 1);
  const SweepResult b = sweep(g, NoiseModel{}, 7);
  EXPECT_TRUE(same_cells(a, b));
}

TEST(Sweep, GridValidation) {
  SweepGrid g = landscape_grid();
  g.y.control = Control::kJy;
  EXPECT_THROW(validate(g), Error);
  g = landscape_grid();
  g.closure = Control::kJy;
  EXPECT_THROW(validate(g), Error);
  g = landscape_grid();
  g.x.points = 0;
  EXPECT_THROW(validate(g), Error);
}

TEST(Sweep, LandscapeArgminAndSingleDegeneracy) {
  NoiseModel nm;
  nm.temperature = 0.0;
  const SweepResult r = sweep(landscape_grid(), nm);
  const LandscapeSummary s = summarize_landscape(r);
  EXPECT_TRUE(s.argmin_in_double_set);
  EXPECT_GT(s.single_count, 0u);
  EXPECT_LT(s.single_median, s.none_median);
}

TEST(Sweep, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(Sensitivity, ZeroDetuningAndQuadraticScaling) {
  for (const HamiltonianParams& p : {onestep_cnot().params, onestep_bgate().params})
    for (Control c : kHamiltonianControls) {
      if (p[c] == 0.0) continue;
      EXPECT_NEAR(detuned_infidelity(p, c, 0.0), 0.0, 1e-15);
      const double full = detuned_infidelity(p, c, 4e-3);
      const double half = detuned_infidelity(p, c, 2e-3);
      EXPECT_NEAR(full / half, 4.0, 0.8) << control_name(c);
    }
}

TEST(Sensitivity, ToleranceRadiusNearThreeTenthsPercent) {
  const Calibration cal = calibrate(Device{});
  for (const HamiltonianParams& p : {onestep_cnot().params, onestep_bgate().params}) {
    const SensitivityReport r = sensitivity(p, cal.noise, 1e-4);
    EXPECT_FALSE(r.non_optimal);
    EXPECT_GE(r.radius, 0.003 / 2);
    EXPECT_LE(r.radius, 0.003 * 2);
    for (const auto& c : r.controls)
      EXPECT_LT(std::abs(c.linear) * c.radius, 1e-3 * c.quadratic * c.radius * c.radius);
  }
}

TEST(Sensitivity, FlagsNonOptimalPoint) {
  const Mat4 cnot = target_gate("CNOT").matrix;
  EXPECT_FALSE(sensitivity(onestep_cnot().params, cnot, NoiseModel{}, 1e-4).non_optimal);
  HamiltonianParams off = onestep_cnot().params;
  off.delta2 *= 1.01;
  EXPECT_TRUE(sensitivity(off, cnot, NoiseModel{}, 1e-4).non_optimal);
}

TEST(Sensitivity, RejectsBadBudget) {
  HamiltonianParams p;
  p.delta1 = 1.0;
  p.jz = 0.3;
  EXPECT_THROW(sensitivity(p, NoiseModel{}, 0.0), Error);
}

TEST(Calibrate, DeviceExample) {
  const Calibration c = calibrate(Device{});
  EXPECT_GE(c.noise.alpha, 0.005);
  EXPECT_LE(c.noise.alpha, 0.02);
  EXPECT_NEAR(c.time_unit_ns, kPi / 10.0, 1e-15);
  EXPECT_NEAR(c.coupling, 2.0, 1e-15);
  EXPECT_EQ(c.noise.temperature, 0.0);
  EXPECT_FALSE(c.weak_coupling_warning);
}

TEST(Calibrate, ZeroRateGivesZeroAlpha) {
  Device d;
  d.t1_inverse_ghz = 0.0;
  EXPECT_EQ(calibrate(d).noise.alpha, 0.0);
}

TEST(Calibrate, RoundTripThroughRelaxationFit) {
  for (double rate : {0.02, 0.1, 0.3}) {
    Device d;
    d.t1_inverse_ghz = rate;
    const Calibration c = calibrate(d);
    const RelaxationCheck r = relax_time_check(c.delta, c.noise);
    EXPECT_NEAR(r.fitted_rate / c.time_unit_ns, rate, 0.05 * rate);
  }
}

TEST(Calibrate, TemperatureAndWarnings) {
  Device d;
  d.temperature_k = 0.02;
  const Calibration c = calibrate(d);
  // k_B T/ħ in rad/ns times the time unit, in π-units
  EXPECT_NEAR(c.noise.temperature, kBoltzmannOverHbar * 0.02 * (kPi / 10.0) / kPi, 1e-12);
  d = {};
  d.t1_inverse_ghz = 5.0;
  EXPECT_TRUE(calibrate(d).weak_coupling_warning);
  d = {};
  d.delta_ghz = 0.0;
  EXPECT_THROW(calibrate(d), Error);
}
