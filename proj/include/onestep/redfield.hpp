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

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "onestep/hamiltonian.hpp"
#include "onestep/linalg.hpp"
#include "onestep/noise.hpp"
#include "onestep/spectrum.hpp"

namespace onestep {

/// Dense rank-4 tensor over the four eigenstates, indexed T(a, b, c, d).
struct Tensor4 {
  std::array<Complex, 256> data{};

  Complex& operator()(int a, int b, int c, int d) {
    return data[64 * a + 16 * b + 4 * c + d];
  }
  Complex operator()(int a, int b, int c, int d) const {
    return data[64 * a + 16 * b + 4 * c + d];
  }
};

/// Superoperator acting on vec(ρ) with vec index 4n + m (eigenbasis).
using Superop = Eigen::Matrix<Complex, 16, 16>;
using SuperVec = Eigen::Matrix<Complex, 16, 1>;

inline SuperVec vectorize(const Mat4& rho) {
  SuperVec v;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) v(4 * n + m) = rho(n, m);
  return v;
}

inline Mat4 unvectorize(const Eigen::Ref<const SuperVec>& v) {
  Mat4 rho;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) rho(n, m) = v(4 * n + m);
  return rho;
}

/// Partial transition rates
///   Λ_lmnk = (1/4π) S(ω_nk) [σᶻ_1,lm σᶻ_1,nk + σᶻ_2,lm σᶻ_2,nk]
/// with the σᶻ matrix elements taken in the eigenbasis of `es`. Only the
/// dissipative (real-S) part is kept; there is no Lamb-shift term.
inline Tensor4 lambda_rates(const EigenSystem& es, const NoiseModel& nm) {
  validate(nm);
  const Mat4 z1 = es.to_eigenbasis(pauli_tensor(Axis::kZ, Axis::kI));
  const Mat4 z2 = es.to_eigenbasis(pauli_tensor(Axis::kI, Axis::kZ));
  Tensor4 lambda;
  if (nm.alpha == 0.0) return lambda;
  std::array<double, 16> s{};
  for (int n = 0; n < 4; ++n)
    for (int k = 0; k < 4; ++k)
      s[4 * n + k] = spectral_function(es.omega(n, k), nm) / (4.0 * kPi);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int k = 0; k < 4; ++k)
          lambda(l, m, n, k) =
              s[4 * n + k] * (z1(l, m) * z1(n, k) + z2(l, m) * z2(n, k));
  return lambda;
}

struct RedfieldTensor {
  Tensor4 r;
  std::array<double, 4> energies{};

  double omega(int n, int m) const { return energies[n] - energies[m]; }

  /// Generator of dρ/dt on vec(ρ):
  ///   (dρ/dt)_nm = -i ω_nm ρ_nm - Σ_kl R_nmkl ρ_kl.
  Superop generator() const {
    Superop g = Superop::Zero();
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) {
        g(4 * n + m, 4 * n + m) += -kI * omega(n, m);
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) g(4 * n + m, 4 * k + l) -= r(n, m, k, l);
      }
    return g;
  }
};

/// Relaxation tensor
///   R_nmkl = δ_lm Σ_r Λ_nrrk + δ_nk Σ_r Λ*_mrrl - Λ_lmnk - Λ*_knml.
/// The second sum carries the index order that follows from the Born-Markov
/// expansion; with it the generator preserves trace and Hermiticity.
inline RedfieldTensor redfield_tensor(const Tensor4& lambda,
                                      const std::array<double, 4>& energies) {
  std::array<Complex, 16> contracted{};  // Σ_r Λ_arrb
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Complex sum = 0.0;
      for (int r = 0; r < 4; ++r) sum += lambda(a, r, r, b);
      contracted[4 * a + b] = sum;
    }
  RedfieldTensor out;
  out.energies = energies;
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          Complex v = -lambda(l, m, n, k) - std::conj(lambda(k, n, m, l));
          if (l == m) v += contracted[4 * n + k];
          if (n == k) v += std::conj(contracted[4 * m + l]);
          out.r(n, m, k, l) = v;
        }
  return out;
}

inline RedfieldTensor redfield_tensor(const EigenSystem& es, const NoiseModel& nm) {
  return redfield_tensor(lambda_rates(es, nm), es.energies);
}

/// Eigensystem plus tensor for one constant Hamiltonian.
struct OpenSystem {
  EigenSystem eigen;
  RedfieldTensor tensor;
  Superop generator;
};

inline OpenSystem make_open_system(const Mat4& h, const NoiseModel& nm) {
  OpenSystem sys;
  sys.eigen = eigensystem(h);
  sys.tensor = redfield_tensor(sys.eigen, nm);
  sys.generator = sys.tensor.generator();
  return sys;
}

/// Memoizes OpenSystem per (HamiltonianParams, NoiseModel). Thread safe.
class RedfieldCache {
 public:
  std::shared_ptr<const OpenSystem> get(const HamiltonianParams& p,
                                        const NoiseModel& nm) {
    const Key key{p.delta1, p.delta2, p.eps1,  p.eps2,  p.jx,
                  p.jy,     p.jz,     nm.alpha, nm.temperature, nm.cutoff};
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto sys = std::make_shared<const OpenSystem>(
        make_open_system(build_hamiltonian(p), nm));
    std::lock_guard lock(mutex_);
    return entries_.emplace(key, std::move(sys)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  using Key = std::array<double, 10>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const OpenSystem>> entries_;
};

}  // namespace onestep
