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

#include <string>
#include <vector>

#include "onestep/error.hpp"
#include "onestep/linalg.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

/// One constant-Hamiltonian step; `generator` is in rad per unit time.
struct PulseStep {
  Mat4 generator = Mat4::Zero();
  double duration = 0.0;
  std::string label;
};

/// Time-ordered list of non-overlapping constant pulses. `amplitude_bound` is
/// the generator spectral norm used for duration accounting.
struct PulseSequence {
  std::vector<PulseStep> steps;
  double amplitude_bound = 0.0;

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : steps) t += s.duration;
    return t;
  }

  /// Ordered product U = U_last ⋯ U_first.
  Mat4 unitary() const {
    Mat4 u = Mat4::Identity();
    for (const auto& s : steps) u = propagator(s.generator, s.duration) * u;
    return u;
  }
};

inline void validate(const PulseSequence& seq) {
  if (seq.steps.empty()) fail(ErrorKind::kInvalidParameter, "empty pulse sequence");
  for (const auto& s : seq.steps) {
    if (!(s.duration > 0.0))
      fail(ErrorKind::kInvalidParameter, "pulse '" + s.label + "' has non-positive duration");
    if (hermiticity_defect(s.generator) > kHermitianTol * std::max(1.0, max_abs(s.generator)))
      fail(ErrorKind::kNonHermitian, "pulse '" + s.label + "' generator is not Hermitian");
  }
}

}  // namespace onestep
