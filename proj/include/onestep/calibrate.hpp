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

#include "onestep/dynamics.hpp"
#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/noise.hpp"

namespace onestep {

/// Boltzmann constant over ħ, rad per nanosecond per kelvin.
inline constexpr double kBoltzmannOverHbar = 130.90949;

/// Physical device description. Frequencies are read as Hamiltonian
/// coefficients in rad/ns (ħ = 1).
struct Device {
  double delta_ghz = 10.0;
  double j_ghz = 20.0;
  double t1_inverse_ghz = 0.1;
  double temperature_k = 0.0;
  double cutoff = 20.0;  // parameter units
};

inline void validate(const Device& d) {
  if (!(d.delta_ghz > 0.0) || !std::isfinite(d.delta_ghz))
    fail(ErrorKind::kInvalidParameter, "delta_ghz must be positive");
  if (!(d.j_ghz >= 0.0) || !(d.t1_inverse_ghz >= 0.0) || !(d.temperature_k >= 0.0) ||
      !std::isfinite(d.j_ghz) || !std::isfinite(d.t1_inverse_ghz) ||
      !std::isfinite(d.temperature_k))
    fail(ErrorKind::kInvalidParameter, "device values must be finite and non-negative");
  if (!(d.cutoff > 0.0)) fail(ErrorKind::kInvalidParameter, "cutoff must be positive");
}

struct Calibration {
  NoiseModel noise;
  /// Physical duration of one unit of time, ns. A parameter value x means a
  /// coefficient x·π/time_unit in rad/ns, so Δ maps to 1.
  double time_unit_ns = 0.0;
  double delta = 1.0;     // Δ in parameter units
  double coupling = 0.0;  // J in parameter units
  double t1_inverse = 0.0;  // target 1/T1 per unit time
  bool weak_coupling_warning = false;
};

/// Chooses α so that the single-qubit relaxation rate of a qubit with
/// tunnelling Δ, 1/T1 = S(2πΔ)/π in parameter units (the rate measured by
/// relax_time_check), equals the device value.
inline Calibration calibrate(const Device& d) {
  validate(d);
  Calibration c;
  c.time_unit_ns = kPi / d.delta_ghz;
  c.coupling = d.j_ghz / d.delta_ghz;
  c.t1_inverse = d.t1_inverse_ghz * c.time_unit_ns;
  c.noise.cutoff = d.cutoff;
  c.noise.temperature = kBoltzmannOverHbar * d.temperature_k * c.time_unit_ns / kEnergyUnit;
  c.noise.alpha = 1.0;
  const double omega_q = 2.0 * kEnergyUnit * c.delta;
  const double unit_rate = RelaxationCheck::kNormalization * 0.5 * kPi *
                           spectral_function(omega_q, c.noise);
  if (!(unit_rate > 0.0))
    fail(ErrorKind::kDomain, "qubit splitting lies above the bath cutoff");
  c.noise.alpha = c.t1_inverse / unit_rate;
  c.weak_coupling_warning = c.noise.outside_weak_coupling();
  return c;
}

}  // namespace onestep
