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

#include <random>

#include "onestep/onestep.hpp"
#include "oracles.hpp"

using namespace onestep;
using E4 = std::array<double, 4>;

namespace {

Mat4 heisenberg_oracle(double j) {
  using namespace oracle;
  return kPi * j * (oracle::tensor(sx(), sx()) + oracle::tensor(sy(), sy()) + oracle::tensor(sz(), sz()));
}

HamiltonianParams random_params(std::mt19937_64& rng) {
  HamiltonianParams p;
  for (Control c : kHamiltonianControls) p[c] = oracle::uniform(rng, -3.0, 3.0);
  return p;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidParameter;
}

}  // namespace

TEST(BuildHamiltonian, ZeroParamsGiveZeroMatrix) {
  EXPECT_EQ(max_abs(build_hamiltonian({})), 0.0);
}

TEST(BuildHamiltonian, OneStepCnotBlocks) {
  HamiltonianParams p;
  p.delta2 = 1.5;
  p.eps1 = -0.25;
  p.eps2 = -0.66;
  p.jz = -0.66;
  const Mat4 h = build_hamiltonian(p) / kPi;
  // Δ2 couples 0↔1 and 2↔3; all other off-block entries vanish.
  EXPECT_NEAR(h(0, 0).real(), -1.57, 1e-12);
  EXPECT_NEAR(h(0, 1).real(), 1.5, 1e-12);
  EXPECT_NEAR(h(1, 1).real(), 1.07, 1e-12);
  EXPECT_NEAR(h(2, 2).real(), 0.25, 1e-12);
  EXPECT_NEAR(h(2, 3).real(), 1.5, 1e-12);
  EXPECT_NEAR(h(3, 3).real(), 0.25, 1e-12);
  EXPECT_EQ(std::abs(h(0, 2)) + std::abs(h(0, 3)) + std::abs(h(1, 2)) +
                std::abs(h(1, 3)),
            0.0);
}

TEST(BuildHamiltonian, HeisenbergMatchesKroneckerOracle) {
  HamiltonianParams p;
  p.jx = p.jy = p.jz = 0.7;
  EXPECT_LT(max_abs(build_hamiltonian(p) - heisenberg_oracle(0.7)), 1e-12);
}

TEST(BuildHamiltonian, MatchesPauliAssemblyOnRandomDraws) {
  using namespace oracle;
  std::mt19937_64 rng(11);
  for (int draw = 0; draw < 1000; ++draw) {
    const HamiltonianParams p = random_params(rng);
    const Mat4 ref =
        kPi * (p.delta1 * oracle::tensor(sx(), id2()) + p.eps1 * oracle::tensor(sz(), id2()) +
               p.delta2 * oracle::tensor(id2(), sx()) + p.eps2 * oracle::tensor(id2(), sz()) +
               p.jx * oracle::tensor(sx(), sx()) + p.jy * oracle::tensor(sy(), sy()) +
               p.jz * oracle::tensor(sz(), sz()));
    const Mat4 h = build_hamiltonian(p);
    ASSERT_LT(max_abs(h - ref), 1e-12) << "draw " << draw;
    ASSERT_LT(max_abs(h - assemble_from_paulis(p)), 1e-12);
    ASSERT_LT(std::abs(h.trace()), 1e-12);
    ASSERT_EQ(hermiticity_defect(h), 0.0);
  }
}

TEST(BuildHamiltonian, RejectsNonFiniteAndOutOfBounds) {
  HamiltonianParams p;
  p.jy = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { build_hamiltonian(p); }), ErrorKind::kInvalidParameter);
  p.jy = std::numeric_limits<double>::infinity();
  EXPECT_EQ(kind_of([&] { build_hamiltonian(p); }), ErrorKind::kInvalidParameter);
  p.jy = 2.0;
  p.bounds = std::array<double, 7>{1, 1, 1, 1, 1, 1, 1};
  EXPECT_EQ(kind_of([&] { build_hamiltonian(p); }), ErrorKind::kInvalidParameter);
  p.jy = 1.0;
  EXPECT_NO_THROW(build_hamiltonian(p));
  p.t0 = 0.0;
  EXPECT_EQ(kind_of([&] { build_hamiltonian(p); }), ErrorKind::kInvalidParameter);
}

TEST(PauliTensor, Examples) {
  using enum Axis;
  EXPECT_EQ(max_abs(pauli_tensor(kI, kI) - Mat4::Identity()), 0.0);
  Vec4 zz;
  zz << 1, -1, -1, 1;
  EXPECT_EQ(max_abs(pauli_tensor(kZ, kZ) - Mat4(zz.asDiagonal())), 0.0);
  const Mat4 xy = pauli_tensor(kX, kY);
  EXPECT_EQ(max_abs(xy * xy - Mat4::Identity()), 0.0);
  EXPECT_EQ(xy(0, 3), Complex(0, -1));
  EXPECT_EQ(xy(1, 2), Complex(0, 1));
  EXPECT_EQ(max_abs(xy - oracle::tensor(oracle::sx(), oracle::sy())), 0.0);
}

TEST(PauliTensor, AllPairsMatchOracle) {
  using enum Axis;
  const Mat2 o[4] = {oracle::id2(), oracle::sx(), oracle::sy(), oracle::sz()};
  const Axis ax[4] = {kI, kX, kY, kZ};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      EXPECT_EQ(max_abs(pauli_tensor(ax[a], ax[b]) - oracle::tensor(o[a], o[b])), 0.0);
}

TEST(Eigensystem, DiagonalInput) {
  Vec4 d;
  d << 1, 2, 3, 4;
  const EigenSystem es = eigensystem(Mat4(d.asDiagonal()));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.energies[i], i + 1.0, 1e-14);
  EXPECT_LT(max_abs(es.vectors - Mat4::Identity()), 1e-14);
}

TEST(Eigensystem, OneStepCnotSpectrum) {
  const EigenSystem es = eigensystem(build_hamiltonian(onestep_cnot(true).params));
  const double expect[4] = {-2.25, -1.25, 1.75, 1.75};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.energies[i] / kPi, expect[i], 1e-12);
  EXPECT_EQ(classify_degeneracy(es).classification, Degeneracy::kSingle);
}

TEST(Eigensystem, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 200; ++draw) {
    const Mat4 h = oracle::random_hermitian<4>(rng);
    const EigenSystem es = eigensystem(h);
    Vec4 e;
    for (int i = 0; i < 4; ++i) e(i) = es.energies[i];
    ASSERT_LT(max_abs(es.vectors * e.asDiagonal() * es.vectors.adjoint() - h), 1e-9);
    ASSERT_LT(max_abs(es.vectors.adjoint() * es.vectors - Mat4::Identity()), 1e-10);
    for (int k = 0; k < 4; ++k)
      ASSERT_LT(max_abs(h * es.vectors.col(k) - es.energies[k] * es.vectors.col(k)),
                1e-10);
    for (int i = 1; i < 4; ++i) ASSERT_LE(es.energies[i - 1], es.energies[i]);
  }
}

TEST(Eigensystem, PhaseConvention) {
  std::mt19937_64 rng(6);
  const Mat4 h = oracle::random_hermitian<4>(rng);
  const EigenSystem es = eigensystem(h);
  for (int k = 0; k < 4; ++k) {
    Eigen::Index best = 0;
    es.vectors.col(k).cwiseAbs().maxCoeff(&best);
    EXPECT_GT(es.vectors(best, k).real(), 0.0);
    EXPECT_EQ(es.vectors(best, k).imag(), 0.0);
  }
  // Recomputing from the same input is bit-identical.
  const EigenSystem again = eigensystem(Mat4(h));
  EXPECT_EQ(max_abs(again.vectors - es.vectors), 0.0);
}

TEST(Eigensystem, DegenerateClusterFollowsProjectionOrder) {
  // Heisenberg triplet: projecting e1..e4 in order gives e1, (e2+e3)/√2, e4.
  const EigenSystem es = eigensystem(heisenberg_oracle(0.5));
  EXPECT_NEAR(es.energies[0] / kPi, -1.5, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(es.energies[i] / kPi, 0.5, 1e-12);
  Mat4 expect = Mat4::Zero();
  expect(1, 0) = 1 / std::sqrt(2.0);
  expect(2, 0) = -1 / std::sqrt(2.0);
  expect(0, 1) = 1;
  expect(1, 2) = expect(2, 2) = 1 / std::sqrt(2.0);
  expect(3, 3) = 1;
  // singlet phase: largest component (first of the tie) real positive
  EXPECT_LT(max_abs(es.vectors - expect), 1e-12);
}

TEST(Eigensystem, RejectsNonHermitian) {
  Mat4 h = Mat4::Zero();
  h(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { eigensystem(h); }), ErrorKind::kNonHermitian);
}

TEST(OptimalPoint, SymmetricDoubleDegeneracy) {
  const auto e = spectrum_optimal_point(1.0, 1.0, 0.0, 1.0, 1.0);
  std::array<double, 4> s = e;
  std::sort(s.begin(), s.end());
  const double expect[4] = {-2, -2, 2, 2};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i] / kPi, expect[i], 1e-14);
  for (double& x : s) x /= kPi;
  EXPECT_EQ(classify_degeneracy(s, 1e-6).classification, Degeneracy::kDouble);
}

TEST(OptimalPoint, PrintedBGateCouplingsAreNearlyDouble) {
  auto e = spectrum_optimal_point(1.0, 1.0, 0.0, 0.58, 1.71);
  for (double& x : e) x /= kPi;
  const DegeneracyReport r = classify_degeneracy(e, 1e-6);
  EXPECT_EQ(r.classification, Degeneracy::kNone);
  // Pairs split by |√(4+(Jy−Jz)²) − (Jy+Jz)|, first order in JyJz − 1.
  const double split = std::abs(std::hypot(2.0, 0.58 - 1.71) - (0.58 + 1.71));
  EXPECT_NEAR(r.double_gap(), split, 1e-12);
  EXPECT_LT(r.double_gap(), 2.0 * std::abs(0.58 * 1.71 - 1.0));
}

TEST(OptimalPoint, AgreesWithEigensolver) {
  std::mt19937_64 rng(13);
  for (int draw = 0; draw < 500; ++draw) {
    HamiltonianParams p = random_params(rng);
    p.eps1 = p.eps2 = 0.0;
    auto e = spectrum_optimal_point(p.delta1, p.delta2, p.jx, p.jy, p.jz);
    std::sort(e.begin(), e.end());
    const EigenSystem es = eigensystem(build_hamiltonian(p));
    for (int i = 0; i < 4; ++i) ASSERT_NEAR(e[i], es.energies[i], 1e-10);
  }
}

TEST(OptimalPoint, ProductConditionImpliesDouble) {
  std::mt19937_64 rng(17);
  for (int draw = 0; draw < 1000; ++draw) {
    const double delta = oracle::uniform(rng, 0.1, 3.0);
    const double jy = oracle::uniform(rng, 0.1, 3.0);
    auto e = spectrum_optimal_point(delta, delta, 0.0, jy, delta * delta / jy);
    for (double& x : e) x /= kPi;
    ASSERT_EQ(classify_degeneracy(e, 1e-8).classification, Degeneracy::kDouble)
        << "delta " << delta << " jy " << jy;
  }
}

TEST(ClassifyDegeneracy, Examples) {
  EXPECT_EQ(classify_degeneracy(E4{-2.25, -1.25, 1.75, 1.75}, 1e-6).classification,
            Degeneracy::kSingle);
  EXPECT_EQ(classify_degeneracy(E4{-2, -2, 2, 2}, 1e-6).classification,
            Degeneracy::kDouble);
  const DegeneracyReport none = classify_degeneracy(E4{0, 1, 2, 3}, 1e-6);
  EXPECT_EQ(none.classification, Degeneracy::kNone);
  EXPECT_DOUBLE_EQ(none.min_gap, 1.0);
  EXPECT_DOUBLE_EQ(none.lower_gap, 1.0);
  EXPECT_DOUBLE_EQ(none.upper_gap, 1.0);
  EXPECT_EQ(none.tolerance, 1e-6);
}

TEST(ClassifyDegeneracy, UnsortedInputAndBadTolerance) {
  EXPECT_EQ(classify_degeneracy(E4{2, -2, 2, -2}, 1e-6).classification,
            Degeneracy::kDouble);
  EXPECT_EQ(kind_of([] { classify_degeneracy(E4{0, 1, 2, 3}, 0.0); }),
            ErrorKind::kInvalidParameter);
}

TEST(ClassifyDegeneracy, EigenSystemOverloadUsesParameterUnits) {
  HamiltonianParams p;
  p.delta1 = p.delta2 = 1.0;
  p.jy = p.jz = 1.0;
  const DegeneracyReport r = classify_degeneracy(eigensystem(build_hamiltonian(p)));
  EXPECT_EQ(r.classification, Degeneracy::kDouble);
  EXPECT_NEAR(r.min_gap, 0.0, 1e-12);
}

TEST(Propagator, MatchesTaylorExponential) {
  std::mt19937_64 rng(21);
  for (int draw = 0; draw < 50; ++draw) {
    const HamiltonianParams p = random_params(rng);
    const Mat4 h = build_hamiltonian(p);
    const double t = oracle::uniform(rng, 0.0, 2.0);
    ASSERT_LT(max_abs(propagator(h, t) - oracle::evolve(h, t)), 1e-10);
  }
}
