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
#include <cstdlib>

#include "onestep/error.hpp"
#include "onestep/hamiltonian.hpp"

namespace onestep {

/// Ohmic bath shared by the two independent reservoirs. alpha is
/// dimensionless; temperature and cutoff are in the Hamiltonian's parameter
/// units (π per unit time).
struct NoiseModel {
  double alpha = 0.01;
  double temperature = 0.2;
  double cutoff = 20.0;
  bool include_lamb_shift = false;

  /// alpha above 0.1 leaves the weak-coupling regime the master equation
  /// assumes; results are produced but flagged.
  bool outside_weak_coupling() const { return alpha > 0.1; }

  bool operator==(const NoiseModel&) const = default;
};

inline void validate(const NoiseModel& nm) {
  if (!std::isfinite(nm.alpha) || nm.alpha < 0.0)
    fail(ErrorKind::kInvalidParameter, "alpha must be finite and >= 0");
  if (!std::isfinite(nm.temperature) || nm.temperature < 0.0)
    fail(ErrorKind::kInvalidParameter, "temperature must be finite and >= 0");
  if (!(nm.cutoff > 0.0))
    fail(ErrorKind::kInvalidParameter, "cutoff must be positive");
  if (nm.include_lamb_shift)
    fail(ErrorKind::kInvalidParameter,
         "Lamb shifts are not implemented; include_lamb_shift must be false");
}

/// S(ω) = α ω coth(ω / 2T) Θ(ωc - ω), with the ω → 0 limit 2αT and the
/// T = 0 limit α|ω|. The step is applied literally, so the cutoff only acts on
/// the positive side and S is even for |ω| ≤ ωc. All arguments share one
/// energy unit; the result is in that unit.
inline double ohmic_spectral_density(double omega, double alpha, double temperature,
                                     double cutoff) {
  if (omega > cutoff) return 0.0;
  if (temperature <= 0.0) return alpha * std::abs(omega);
  const double x = omega / (2.0 * temperature);
  if (std::abs(x) < 1e-6) return 2.0 * alpha * temperature * (1.0 + x * x / 3.0);
  return alpha * omega / std::tanh(x);
}

/// Spectral function for a transition frequency in rad per unit time.
inline double spectral_function(double omega, const NoiseModel& nm) {
  return ohmic_spectral_density(omega, nm.alpha, kEnergyUnit * nm.temperature,
                                kEnergyUnit * nm.cutoff);
}

}  // namespace onestep
