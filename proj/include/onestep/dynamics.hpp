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
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/linalg.hpp"
#include "onestep/noise.hpp"
#include "onestep/pulse.hpp"
#include "onestep/redfield.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

enum class Basis { kStandard, kEigen };

struct DensityMatrix {
  Mat4 rho = Mat4::Zero();
  Basis basis = Basis::kStandard;
};

inline constexpr double kStateHermitianTol = 1e-9;
inline constexpr double kStateTraceTol = 1e-9;
inline constexpr double kStateNegativityTol = -1e-6;
/// Lower eigenvalue bound for propagated states. Without the secular
/// approximation the Redfield generator is not completely positive, and pure
/// probe states acquire eigenvalues of order -α·10⁻² at low temperature.
inline constexpr double kPropagatedNegativityTol = -1e-3;

struct StateCheck {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double min_eigenvalue_tol = kStateNegativityTol) const {
    return hermiticity <= kStateHermitianTol && trace_error <= kStateTraceTol &&
           min_eigenvalue >= min_eigenvalue_tol;
  }
};

inline StateCheck check_state(const Mat4& rho) {
  StateCheck c;
  c.hermiticity = hermiticity_defect(rho);
  c.trace_error = std::abs(rho.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()),
                                         Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues()(0);
  return c;
}

inline void validate_state(const Mat4& rho, const std::string& context,
                           double min_eigenvalue_tol = kStateNegativityTol) {
  const StateCheck c = check_state(rho);
  if (!c.ok(min_eigenvalue_tol))
    fail(ErrorKind::kStateValidity,
         context + ": hermiticity " + std::to_string(c.hermiticity) + ", trace error " +
             std::to_string(c.trace_error) + ", min eigenvalue " +
             std::to_string(c.min_eigenvalue));
}

inline double purity(const Mat4& rho) { return (rho * rho).trace().real(); }

/// |↓⟩, |↑⟩, (|↓⟩+|↑⟩)/√2, (|↓⟩+i|↑⟩)/√2 with |↑⟩ = (1, 0).
inline std::array<Vec2, 4> single_qubit_probe_states() {
  const Vec2 up(1.0, 0.0), down(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  return {down, up, s * (down + up), s * (down + kI * up)};
}

/// The 16 product probe kets |Ψ_a⟩ ⊗ |Ψ_b⟩, a (qubit 1) running slowest.
inline std::array<Vec4, 16> initial_kets() {
  const auto single = single_qubit_probe_states();
  std::array<Vec4, 16> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[4 * a + b] = kron(single[a], single[b]);
  return out;
}

inline std::vector<Mat4> initial_states() {
  std::vector<Mat4> out;
  for (const Vec4& k : initial_kets()) out.push_back(k * k.adjoint());
  return out;
}

struct PropagationOptions {
  /// Integrator step; 0 selects min(duration / 2000, 0.005 / max|E|) per
  /// constant segment.
  double dt = 0.0;
  /// Output intervals over the whole run (a run of n intervals has n+1 samples).
  int samples = 100;
  bool verify_halving = true;
  double halving_tol = 1e-8;
  bool validate_states = true;
  double min_eigenvalue = kPropagatedNegativityTol;
};

inline constexpr double kDefaultStepsPerUnit = 2000.0;
inline constexpr double kMaxPhasePerStep = 0.005;

struct Trajectory {
  std::vector<double> times;
  /// states[sample][member], standard basis.
  std::vector<std::vector<Mat4>> states;
};

namespace detail {

/// One classical RK4 step of the linear ODE dx/dt = G x is multiplication by
/// the fourth-order Taylor polynomial of exp(hG).
inline Superop rk4_step_matrix(const Superop& g, double h) {
  const Superop a = h * g;
  const Superop a2 = a * a;
  return Superop::Identity() + a + a2 / 2.0 + a2 * a / 6.0 + a2 * a2 / 24.0;
}

inline Superop matrix_power(Superop base, long long n) {
  Superop out = Superop::Identity();
  while (n > 0) {
    if (n & 1) out = out * base;
    base = base * base;
    n >>= 1;
  }
  return out;
}

using Batch = Eigen::Matrix<Complex, 16, Eigen::Dynamic>;

inline Batch to_batch(const std::vector<Mat4>& rhos, const EigenSystem& es) {
  Batch b(16, static_cast<Eigen::Index>(rhos.size()));
  for (std::size_t j = 0; j < rhos.size(); ++j)
    b.col(static_cast<Eigen::Index>(j)) = vectorize(es.to_eigenbasis(rhos[j]));
  return b;
}

inline std::vector<Mat4> from_batch(const Batch& b, const EigenSystem& es) {
  std::vector<Mat4> out;
  out.reserve(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    out.push_back(es.from_eigenbasis(unvectorize(b.col(j))));
  return out;
}

/// Propagates a batch through `intervals` equal output intervals, each made
/// of `steps` RK4 steps. Returns intervals+1 batches (including the start).
inline std::vector<Batch> run_fixed_step(const Superop& g, const Batch& start,
                                         double duration, int intervals, long long steps) {
  const double h = duration / (static_cast<double>(intervals) * static_cast<double>(steps));
  const Superop transfer = matrix_power(rk4_step_matrix(g, h), steps);
  std::vector<Batch> out;
  out.reserve(static_cast<std::size_t>(intervals) + 1);
  out.push_back(start);
  for (int i = 0; i < intervals; ++i) out.push_back(transfer * out.back());
  return out;
}

}  // namespace detail

/// Propagates a set of states (standard basis) under one constant Hamiltonian
/// for `duration`, integrating in its eigenbasis with a fixed-step RK4 scheme.
/// With verify_halving the run is repeated at dt/2 and every sample must agree
/// to halving_tol in max-norm.
inline Trajectory propagate_ensemble(const std::vector<Mat4>& rho0, const OpenSystem& sys,
                                     double duration, int intervals,
                                     const PropagationOptions& opt, double t_offset = 0.0) {
  if (!(duration > 0.0)) fail(ErrorKind::kInvalidParameter, "duration must be positive");
  if (intervals < 1) fail(ErrorKind::kInvalidParameter, "need at least one output interval");
  double dt = opt.dt;
  if (!(dt > 0.0)) {
    const double e_max = std::max(std::abs(sys.eigen.energies[0]), std::abs(sys.eigen.energies[3]));
    dt = duration / kDefaultStepsPerUnit;
    if (e_max > 0.0) dt = std::min(dt, kMaxPhasePerStep / e_max);
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::kInvalidParameter, "dt must be positive");
  const double per_interval = duration / intervals;
  const long long steps = std::max(1LL, static_cast<long long>(std::ceil(per_interval / dt - 1e-9)));

  const detail::Batch start = detail::to_batch(rho0, sys.eigen);
  const auto coarse = detail::run_fixed_step(sys.generator, start, duration, intervals, steps);
  if (opt.verify_halving) {
    const auto fine = detail::run_fixed_step(sys.generator, start, duration, intervals, 2 * steps);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double diff = max_abs(coarse[i] - fine[i]);
      if (!(diff < opt.halving_tol))
        fail(ErrorKind::kIntegration,
             "step-halving check failed (change " + std::to_string(diff) + " at sample " +
                 std::to_string(i) + "); reduce dt");
    }
  }

  Trajectory traj;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    traj.times.push_back(t_offset + per_interval * static_cast<double>(i));
    traj.states.push_back(detail::from_batch(coarse[i], sys.eigen));
  }
  traj.times.back() = t_offset + duration;
  return traj;
}

/// Single-state convenience wrapper; accepts eigenbasis input too.
inline std::vector<DensityMatrix> propagate(const DensityMatrix& rho0, const OpenSystem& sys,
                                            double t_final, const PropagationOptions& opt) {
  const Mat4 start = rho0.basis == Basis::kEigen ? sys.eigen.from_eigenbasis(rho0.rho) : rho0.rho;
  if (opt.validate_states) validate_state(start, "initial state");
  const Trajectory traj = propagate_ensemble({start}, sys, t_final, opt.samples, opt);
  std::vector<DensityMatrix> out;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (opt.validate_states)
      validate_state(traj.states[i][0], "t=" + std::to_string(traj.times[i]), opt.min_eigenvalue);
    out.push_back({traj.states[i][0], Basis::kStandard});
  }
  return out;
}

/// Averaged purity over the 16 probe states, P(t) = (1/16) Σ_j Tr ρ_j(t)².
struct PurityTrace {
  std::vector<double> times;
  std::vector<double> purity;
  std::vector<std::array<double, 16>> per_state;
  /// dP/dt at t = 0 from the master-equation right-hand side.
  double initial_slope = 0.0;

  double decay_rate() const { return std::abs(initial_slope); }
  double final_loss() const { return purity.empty() ? 0.0 : 1.0 - purity.back(); }
};

/// dP/dt|₀ = (1/16) Σ_j 2 Re Tr(ρ_j ρ̇_j), evaluated with the generator.
/// The commutator with E drops out of dTr(ρ²)/dt, so only R contributes.
inline double initial_purity_slope(const OpenSystem& sys) {
  double sum = 0.0;
  for (const Mat4& rho : initial_states()) {
    const Mat4 r = sys.eigen.to_eigenbasis(rho);
    Mat4 rdot = Mat4::Zero();
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) rdot(n, m) -= sys.tensor.r(n, m, k, l) * r(k, l);
    sum += 2.0 * (r * rdot).trace().real();
  }
  return sum / 16.0;
}

inline double initial_purity_slope(const HamiltonianParams& p, const NoiseModel& nm) {
  return initial_purity_slope(make_open_system(build_hamiltonian(p), nm));
}

namespace detail {

inline void append_purity(PurityTrace& out, const Trajectory& traj, bool skip_first,
                          bool validate, double min_eigenvalue) {
  for (std::size_t i = skip_first ? 1 : 0; i < traj.times.size(); ++i) {
    std::array<double, 16> per{};
    double mean = 0.0;
    for (std::size_t j = 0; j < traj.states[i].size(); ++j) {
      if (validate)
        validate_state(traj.states[i][j],
                       "state " + std::to_string(j + 1) + " at t=" + std::to_string(traj.times[i]),
                       min_eigenvalue);
      per[j] = purity(traj.states[i][j]);
      mean += per[j];
    }
    out.times.push_back(traj.times[i]);
    out.purity.push_back(mean / 16.0);
    out.per_state.push_back(per);
  }
}

}  // namespace detail

/// Runs the 16 probe states through the constant-Hamiltonian segments in
/// order. Each segment gets output intervals in proportion to its duration.
/// Samples are appended to `out` as they pass validation, so on an error
/// `out` holds the valid prefix of the trace.
inline void sequence_purity_into(const std::vector<std::pair<Mat4, double>>& segments,
                                 const NoiseModel& nm, const PropagationOptions& opt,
                                 PurityTrace& out) {
  validate(nm);
  if (segments.empty()) fail(ErrorKind::kInvalidParameter, "no segments to propagate");
  double total = 0.0;
  for (const auto& [h, d] : segments) {
    if (!(d > 0.0)) fail(ErrorKind::kInvalidParameter, "segment duration must be positive");
    total += d;
  }
  out = PurityTrace{};
  std::vector<Mat4> states = initial_states();
  double t = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& [h, d] = segments[s];
    const OpenSystem sys = make_open_system(h, nm);
    if (s == 0) out.initial_slope = initial_purity_slope(sys);
    const int intervals =
        std::max(1, static_cast<int>(std::lround(opt.samples * d / total)));
    const Trajectory traj = propagate_ensemble(states, sys, d, intervals, opt, t);
    detail::append_purity(out, traj, s > 0, opt.validate_states, opt.min_eigenvalue);
    states = traj.states.back();
    t += d;
  }
}

inline PurityTrace sequence_purity(const std::vector<std::pair<Mat4, double>>& segments,
                                   const NoiseModel& nm, const PropagationOptions& opt) {
  PurityTrace out;
  sequence_purity_into(segments, nm, opt, out);
  return out;
}

inline std::vector<std::pair<Mat4, double>> segments_of(const PulseSequence& seq) {
  validate(seq);
  std::vector<std::pair<Mat4, double>> segments;
  for (const auto& step : seq.steps) segments.emplace_back(step.generator, step.duration);
  return segments;
}

/// Purity trace of the constant pulse defined by `p`, run for t_final.
inline PurityTrace gate_purity(const HamiltonianParams& p, const NoiseModel& nm, double t_final,
                               const PropagationOptions& opt = {}) {
  return sequence_purity({{build_hamiltonian(p), t_final}}, nm, opt);
}

inline PurityTrace gate_purity(const HamiltonianParams& p, const NoiseModel& nm,
                               const PropagationOptions& opt = {}) {
  return gate_purity(p, nm, p.t0, opt);
}

inline PurityTrace protocol_purity(const PulseSequence& seq, const NoiseModel& nm,
                                   const PropagationOptions& opt = {}) {
  return sequence_purity(segments_of(seq), nm, opt);
}

/// Single-qubit relaxation: fitted 1/T1 versus the reference (π/2) S(ω_q).
struct RelaxationCheck {
  /// Fixed ratio fitted / reference implied by the 1/4π prefactor of the
  /// partial rates: 1/T1 = S(ω_q)/π.
  static constexpr double kNormalization = 2.0 / (kPi * kPi);

  double fitted_rate = 0.0;
  double analytic_rate = 0.0;
  double ratio = 0.0;             // fitted / analytic
  double normalized_ratio = 0.0;  // ratio / kNormalization
  double qubit_splitting = 0.0;   // ω_q, rad per unit time
  double fit_residual = 0.0;      // max |log w - fit|
};

/// Qubit 1 with tunnelling `delta` (parameter units) and no couplings or
/// biases, prepared in its excited eigenstate; qubit 2 idles. The decay rate
/// of the qubit-1 inversion ⟨σˣ⊗1⟩ is fitted on a log scale.
inline RelaxationCheck relax_time_check(double delta, const NoiseModel& nm) {
  validate(nm);
  if (!(delta > 0.0)) fail(ErrorKind::kInvalidParameter, "delta must be positive");
  HamiltonianParams p;
  p.delta1 = delta;
  RelaxationCheck out;
  out.qubit_splitting = 2.0 * kEnergyUnit * delta;
  out.analytic_rate = 0.5 * kPi * spectral_function(out.qubit_splitting, nm);
  if (out.analytic_rate == 0.0) return out;

  const OpenSystem sys = make_open_system(build_hamiltonian(p), nm);
  const double s = 1.0 / std::sqrt(2.0);
  const Vec4 ket = kron(Vec2(s, s), Vec2(1.0, 0.0));
  const Mat4 rho0 = ket * ket.adjoint();
  const Mat4 inversion_op = pauli_tensor(Axis::kX, Axis::kI);

  const double expected = RelaxationCheck::kNormalization * out.analytic_rate;
  const double t_end = 1.5 / expected;
  const int intervals = 60;
  PropagationOptions opt;
  opt.dt = std::min(0.02 / out.qubit_splitting, t_end / intervals);
  opt.samples = intervals;
  const Trajectory traj = propagate_ensemble({rho0}, sys, t_end, intervals, opt);

  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double w = (traj.states[i][0] * inversion_op).trace().real();
    if (!(w > 0.0)) fail(ErrorKind::kFitFailure, "inversion changed sign during decay");
    ts.push_back(traj.times[i]);
    ys.push_back(std::log(w));
  }
  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i]; sy += ys[i]; stt += ts[i] * ts[i]; sty += ts[i] * ys[i];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double intercept = (sy - slope * st) / n;
  for (std::size_t i = 0; i < ts.size(); ++i)
    out.fit_residual = std::max(out.fit_residual, std::abs(ys[i] - (intercept + slope * ts[i])));
  if (out.fit_residual > 1e-3)
    fail(ErrorKind::kFitFailure, "decay is not exponential (log residual " +
                                     std::to_string(out.fit_residual) + ")");
  out.fitted_rate = -slope;
  out.ratio = out.fitted_rate / out.analytic_rate;
  out.normalized_ratio = out.ratio / RelaxationCheck::kNormalization;
  return out;
}

}  // namespace onestep
