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

#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls the library's exponential, kron or operator builders.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline M eye(int d) { return M::Identity(d, d); }

/// (A (x) B)[i*rb + k, j*cb + l] = A[i,j] B[k,l]
inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline M ix() {
  M m(2, 2);
  m << 0, 0.5, 0.5, 0;
  return m;
}
inline M iy() {
  M m(2, 2);
  m << 0, C(0, -0.5), C(0, 0.5), 0;
  return m;
}
inline M iz() {
  M m(2, 2);
  m << 0.5, 0, 0, -0.5;
  return m;
}

/// Single-spin operator `op` on spin k of n (spin 0 leftmost).
inline M op_on(const M& op, int k, int n) {
  M out = M::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == k ? op : eye(2));
  return out;
}

/// exp(-i H t) by scaling and squaring of a Taylor series.
inline M expm(const M& h, double t) {
  M a = C(0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  a /= std::pow(2.0, squarings);
  M term = eye(static_cast<int>(h.rows()));
  M sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// exp(-i angle n.I) on one spin, via the series.
inline M rot(double nx, double ny, double nz, double angle) {
  return expm(nx * ix() + ny * iy() + nz * iz(), angle);
}

/// 2 pi J_ij I_i.I_j summed over i<j; J in Hz.
inline M h0(const std::vector<std::vector<double>>& j) {
  const int n = static_cast<int>(j.size());
  M h = M::Zero(1 << n, 1 << n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (j[a][b] != 0.0)
        h += 2 * kPi * j[a][b] *
             (op_on(ix(), a, n) * op_on(ix(), b, n) + op_on(iy(), a, n) * op_on(iy(), b, n) +
              op_on(iz(), a, n) * op_on(iz(), b, n));
  return h;
}

/// -sum gamma_k B.I_k
inline M hdc(const std::vector<double>& gammas, double bx, double by, double bz) {
  const int n = static_cast<int>(gammas.size());
  M h = M::Zero(1 << n, 1 << n);
  for (int k = 0; k < n; ++k)
    h -= gammas[k] * (bx * op_on(ix(), k, n) + by * op_on(iy(), k, n) + bz * op_on(iz(), k, n));
  return h;
}

inline double fidelity(const M& ideal, const M& u) {
  return std::abs((ideal.adjoint() * u).trace()) / static_cast<double>(u.rows());
}

/// The 4x4 CNOT written out literally (control spin 0, basis |00>,|01>,|10>,|11>).
inline M cnot4() {
  M m = M::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

/// Two-spin ZZ block by matrix products: e^{-iHt} Z_1 e^{-iHt} Z_1^dagger.
inline M uzz_two_spin(double j_hz, double t) {
  const M h = h0({{0, j_hz}, {j_hz, 0}});
  const M z = kron(eye(2), rot(0, 0, 1, kPi));
  return expm(h, t) * z * expm(h, t) * z.adjoint();
}

/// CNOT (control 0, target 1) from the five-factor product with J > 0.
inline M cnot_five_factor(double j_hz) {
  const double q = kPi / 2;
  const M uy_t = kron(eye(2), rot(0, 1, 0, q));
  const M ux_t = kron(eye(2), rot(1, 0, 0, q));
  const M uz_t_dag = kron(eye(2), rot(0, 0, 1, -q));
  const M uz_c = kron(rot(0, 0, 1, q), eye(2));
  return uz_c * uz_t_dag * ux_t * uzz_two_spin(j_hz, 1.0 / (4.0 * j_hz)) * uy_t;
}

}  // namespace oracle
