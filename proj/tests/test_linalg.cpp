// Copyright 2026 The zfqc Authors
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

#include "oracles.hpp"
#include "zfqc/linalg.hpp"

using namespace zfqc;

namespace {

ComplexMatrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(d(rng), d(rng));
  return (a + a.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(int dim, std::mt19937& rng) {
  return expm_hermitian(random_hermitian(dim, rng), 1.0);
}

}  // namespace

TEST(SpinOperator, SingleSpinZ) {
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = 0.5;
  expect(1, 1) = -0.5;
  EXPECT_LT((spin_operator(0, Axis::z, 1) - expect).norm(), 1e-15);
}

TEST(SpinOperator, SingleSpinX) {
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 1) = expect(1, 0) = 0.5;
  EXPECT_LT((spin_operator(0, Axis::x, 1) - expect).norm(), 1e-15);
}

TEST(SpinOperator, SecondOfTwoIsIdentityTensorZ) {
  const ComplexMatrix s = spin_operator(1, Axis::z, 2);
  const double d[4] = {0.5, -0.5, 0.5, -0.5};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s(i, i).real(), d[i]);
  EXPECT_DOUBLE_EQ(s.cwiseAbs().sum(), 2.0);
}

TEST(SpinOperator, HermitianTracelessWithHalfSpectrum) {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k < n; ++k) {
      for (Axis a : {Axis::x, Axis::y, Axis::z}) {
        const ComplexMatrix s = spin_operator(k, a, n);
        EXPECT_LE((s - s.adjoint()).norm(), 1e-14);
        EXPECT_LE(std::abs(s.trace()), 1e-14);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
        int plus = 0, minus = 0;
        for (int i = 0; i < s.rows(); ++i) {
          if (std::abs(es.eigenvalues()(i) - 0.5) < 1e-12) ++plus;
          if (std::abs(es.eigenvalues()(i) + 0.5) < 1e-12) ++minus;
        }
        EXPECT_EQ(plus, 1 << (n - 1));
        EXPECT_EQ(minus, 1 << (n - 1));
      }
    }
  }
}

TEST(SpinOperator, MatchesOracleEmbedding) {
  const oracle::M ops[3] = {oracle::ix(), oracle::iy(), oracle::iz()};
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_LT((spin_operator(k, static_cast<Axis>(a), 3) - oracle::op_on(ops[a], k, 3)).norm(),
                1e-15);
    }
  }
}

TEST(SpinOperator, RejectsBadArguments) {
  EXPECT_THROW(spin_operator(2, Axis::x, 2), ValidationError);
  EXPECT_THROW(spin_operator(-1, Axis::x, 2), ValidationError);
  EXPECT_THROW(spin_operator(0, Axis::x, 9), ValidationError);
}

TEST(Kron, IdentitiesAndZ) {
  EXPECT_LT((kron(identity(2), identity(2)) - identity(4)).norm(), 1e-15);
  const ComplexMatrix k = kron(spin_operator(0, Axis::z, 1), identity(2));
  const double d[4] = {0.5, 0.5, -0.5, -0.5};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(k(i, i).real(), d[i]);
}

TEST(Kron, MatchesIndexFormula) {
  const ComplexMatrix x = spin_operator(0, Axis::x, 1);
  EXPECT_LT((kron(x, x) - oracle::kron(x, x)).norm(), 1e-15);
  std::mt19937 rng(7);
  const ComplexMatrix a = random_hermitian(3, rng), b = random_hermitian(2, rng),
                      c = random_hermitian(2, rng);
  EXPECT_LT((kron(a, b) - oracle::kron(a, b)).norm(), 1e-13);
  EXPECT_LT((kron(kron(a, b), c) - kron(a, kron(b, c))).norm(), 1e-12);
}

TEST(Expm, ZeroIsIdentity) {
  EXPECT_LT((expm_hermitian(ComplexMatrix::Zero(4, 4), 3.7) - identity(4)).norm(), 1e-15);
}

TEST(Expm, DiagonalIz) {
  const double theta = 0.83;
  const ComplexMatrix u = expm_hermitian(spin_operator(0, Axis::z, 1), theta);
  EXPECT_LT(std::abs(u(0, 0) - std::polar(1.0, -theta / 2)), 1e-15);
  EXPECT_LT(std::abs(u(1, 1) - std::polar(1.0, theta / 2)), 1e-15);
  EXPECT_LT(std::abs(u(0, 1)) + std::abs(u(1, 0)), 1e-15);
}

TEST(Expm, RandomEightByEightMatchesTaylorOracle) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_hermitian(8, rng);
    EXPECT_LT((expm_hermitian(h, 1.0) - oracle::expm(h, 1.0)).norm(), 1e-10);
  }
}

TEST(Expm, GroupPropertyAndUnitarity) {
  std::mt19937 rng(3);
  const ComplexMatrix h = random_hermitian(16, rng);
  const ComplexMatrix a = expm_hermitian(h, 0.4), b = expm_hermitian(h, 1.1);
  EXPECT_LT((a * b - expm_hermitian(h, 1.5)).norm(), 1e-10);
  EXPECT_LT(unitarity_defect(a), 1e-10);
}

TEST(Expm, CommutingSumsFactor) {
  const ComplexMatrix h1 = 3.0 * spin_operator(0, Axis::z, 3);
  const ComplexMatrix h2 = -1.7 * spin_operator(2, Axis::x, 3);
  EXPECT_LT((expm_hermitian(h1 + h2, 0.9) - expm_hermitian(h1, 0.9) * expm_hermitian(h2, 0.9))
                .norm(),
            1e-10);
}

TEST(Expm, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(expm_hermitian(m, 1.0), ValidationError);
}

TEST(Fidelity, SelfAndGlobalPhase) {
  std::mt19937 rng(11);
  const ComplexMatrix u = random_unitary(8, rng);
  EXPECT_NEAR(gate_fidelity(u, u), 1.0, 1e-14);
  EXPECT_NEAR(gate_fidelity(u, std::polar(1.0, 2.1) * u), 1.0, 1e-14);
}

TEST(Fidelity, IdentityVersusCnotIsHalf) {
  EXPECT_NEAR(gate_fidelity(identity(4), oracle::cnot4()), 0.5, 1e-15);
}

TEST(Fidelity, SymmetricAndLeftInvariant) {
  std::mt19937 rng(5);
  const ComplexMatrix u = random_unitary(4, rng), v = random_unitary(4, rng),
                      w = random_unitary(4, rng);
  EXPECT_NEAR(gate_fidelity(u, v), gate_fidelity(v, u), 1e-14);
  EXPECT_NEAR(gate_fidelity(w * u, w * v), gate_fidelity(u, v), 1e-13);
  const double f = gate_fidelity(u, v);
  EXPECT_GE(f, 0.0);
  EXPECT_LE(f, 1.0);
}

TEST(Fidelity, DimensionMismatchThrows) {
  EXPECT_THROW(gate_fidelity(identity(2), identity(4)), ValidationError);
}

TEST(Rotation, ClosedFormMatchesSeries) {
  const Vec3 n = Vec3(0.3, -0.5, 0.8).normalized();
  const ComplexMatrix r = single_spin_rotation(n, 1.3);
  EXPECT_LT((r - oracle::rot(n.x(), n.y(), n.z(), 1.3)).norm(), 1e-13);
}

TEST(SpinSetTest, BasicOperations) {
  SpinSet s{0, 2};
  EXPECT_TRUE(s.contains(0));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.complement(4), (SpinSet{1, 3}));
  EXPECT_TRUE(s.intersects(SpinSet{2}));
  EXPECT_EQ(s.indices(), (std::vector<int>{0, 2}));
}
