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

#include "onestep/calibrate.hpp"
#include "onestep/config.hpp"
#include "onestep/constructions.hpp"
#include "onestep/dynamics.hpp"
#include "onestep/error.hpp"
#include "onestep/gates.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/invariants.hpp"
#include "onestep/io.hpp"
#include "onestep/linalg.hpp"
#include "onestep/metrics.hpp"
#include "onestep/nelder_mead.hpp"
#include "onestep/noise.hpp"
#include "onestep/optimize.hpp"
#include "onestep/parallel.hpp"
#include "onestep/pulse.hpp"
#include "onestep/redfield.hpp"
#include "onestep/sensitivity.hpp"
#include "onestep/spectrum.hpp"
#include "onestep/sweep.hpp"
