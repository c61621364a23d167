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

// Dense complex operators on n spin-1/2 particles.
//
// Basis convention: spin 0 is the leftmost tensor factor (most significant
// bit of the basis index) and |0> is the +1/2 eigenvector of I_z. With this
// ordering the textbook CNOT matrix appears literally for control = spin 0,
// target = spin 1.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "zfqc/errors.hpp"

namespace zfqc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
// Same representation as ComplexMatrix; the name documents that the value
// satisfies ||U^dagger U - I||_F <= kUnitarityTolerance.
using UnitaryMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr int kMaxSpins = 8;
inline constexpr double kHermiticityTolerance = 1e-12;  // relative, Frobenius
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;

enum class Axis { x, y, z };

inline Vec3 axis_vector(Axis a) {
  switch (a) {
    case Axis::x: return Vec3::UnitX();
    case Axis::y: return Vec3::UnitY();
    case Axis::z: return Vec3::UnitZ();
  }
  return Vec3::UnitZ();
}

inline char axis_name(Axis a) {
  return a == Axis::x ? 'x' : (a == Axis::y ? 'y' : 'z');
}

/// Set of spin indices (0-based) packed into a bit mask.
class SpinSet {
 public:
  SpinSet() = default;
  SpinSet(std::initializer_list<int> spins) {
    for (int s : spins) insert(s);
  }
  explicit SpinSet(const std::vector<int>& spins) {
    for (int s : spins) insert(s);
  }
  static SpinSet from_mask(std::uint32_t mask) {
    SpinSet s;
    s.bits_ = mask;
    return s;
  }
  static SpinSet all(int n) { return from_mask((std::uint32_t{1} << n) - 1u); }

  void insert(int spin) {
    if (spin < 0 || spin >= 32) {
      throw ValidationError("spin index " + std::to_string(spin) +
                            " out of range");
    }
    bits_ |= std::uint32_t{1} << spin;
  }
  bool contains(int spin) const {
    return spin >= 0 && spin < 32 && ((bits_ >> spin) & 1u) != 0;
  }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint32_t mask() const { return bits_; }

  /// Spins of the complement within an n-spin system.
  SpinSet complement(int n) const { return from_mask(all(n).bits_ & ~bits_); }
  bool intersects(const SpinSet& o) const { return (bits_ & o.bits_) != 0; }
  SpinSet operator|(const SpinSet& o) const { return from_mask(bits_ | o.bits_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const SpinSet&, const SpinSet&) = default;
  friend bool operator<(const SpinSet& a, const SpinSet& b) {
    return a.bits_ < b.bits_;
  }

 private:
  std::uint32_t bits_ = 0;
};

inline void check_spin_count(int n_spins) {
  if (n_spins < 1 || n_spins > kMaxSpins) {
    throw ValidationError("spin count " + std::to_string(n_spins) +
                          " outside supported range 1.." +
                          std::to_string(kMaxSpins));
  }
}

inline int dimension_for(int n_spins) {
  check_spin_count(n_spins);
  return 1 << n_spins;
}

inline ComplexMatrix identity(int dim) {
  return ComplexMatrix::Identity(dim, dim);
}

/// Tensor product A (x) B; A's index is the more significant one.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Single-spin angular momentum matrix (Pauli / 2).
inline ComplexMatrix single_spin_operator(Axis axis) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      m(0, 1) = 0.5;
      m(1, 0) = 0.5;
      break;
    case Axis::y:
      m(0, 1) = Complex(0.0, -0.5);
      m(1, 0) = Complex(0.0, 0.5);
      break;
    case Axis::z:
      m(0, 0) = 0.5;
      m(1, 1) = -0.5;
      break;
  }
  return m;
}

/// Embeds a 2x2 operator acting on `spin` into the n-spin space.
inline ComplexMatrix embed(const ComplexMatrix& local, int spin, int n_spins) {
  check_spin_count(n_spins);
  if (spin < 0 || spin >= n_spins) {
    throw ValidationError("spin index " + std::to_string(spin) +
                          " out of range for " + std::to_string(n_spins) +
                          " spins");
  }
  const int left = 1 << spin;
  const int right = 1 << (n_spins - spin - 1);
  return kron(kron(identity(left), local), identity(right));
}

/// I_{spin,axis} in the n-spin Hilbert space.
inline ComplexMatrix spin_operator(int spin, Axis axis, int n_spins) {
  return embed(single_spin_operator(axis), spin, n_spins);
}

/// n . I for one spin.
inline ComplexMatrix spin_projection(int spin, const Vec3& n, int n_spins) {
  return n.x() * spin_operator(spin, Axis::x, n_spins) +
         n.y() * spin_operator(spin, Axis::y, n_spins) +
         n.z() * spin_operator(spin, Axis::z, n_spins);
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const ComplexMatrix& m,
                         double rel_tol = kHermiticityTolerance) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.norm();
  return hermiticity_defect(m) <= rel_tol * (scale > 0 ? scale : 1.0);
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - identity(static_cast<int>(u.rows()))).norm();
}

/// Eigendecomposition of a Hermitian generator, reusable for any duration:
/// exp(-i H t) = V diag(exp(-i lambda t)) V^dagger.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) {
      throw ValidationError("generator must be square");
    }
    if (!is_hermitian(h)) {
      throw ValidationError("generator is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(h)) + ")");
    }
    // Symmetrize so round-off in the strict lower triangle cannot leak in.
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
      throw ValidationError("Hermitian eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  UnitaryMatrix at(double t) const {
    Eigen::VectorXcd phases(eigenvalues_.size());
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
      phases(k) = std::polar(1.0, -eigenvalues_(k) * t);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
  }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

 private:
  Eigen::VectorXd eigenvalues_;
  ComplexMatrix eigenvectors_;
};

/// exp(-i H t) for Hermitian H.
inline UnitaryMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  return HermitianPropagator(h).at(t);
}

/// |Tr(U_ideal^dagger U)| / dim, invariant under a global phase of either
/// argument.
inline double gate_fidelity(const UnitaryMatrix& ideal, const UnitaryMatrix& u) {
  if (ideal.rows() != u.rows() || ideal.cols() != u.cols() ||
      ideal.rows() != ideal.cols()) {
    throw ValidationError("gate_fidelity: dimension mismatch (" +
                          std::to_string(ideal.rows()) + " vs " +
                          std::to_string(u.rows()) + ")");
  }
  // Tr(A^dagger B) = sum conj(A_ij) B_ij, no product matrix needed.
  const Complex overlap = ideal.cwiseProduct(u.conjugate()).sum();
  const double f = std::abs(overlap) / static_cast<double>(u.rows());
  return f > 1.0 ? 1.0 : f;
}

/// exp(-i angle n.I_s) for one spin, in closed form:
/// cos(angle/2) 1 - 2i sin(angle/2) n.I.
inline ComplexMatrix single_spin_rotation(const Vec3& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  ComplexMatrix r(2, 2);
  r(0, 0) = Complex(c, -s * axis.z());
  r(1, 1) = Complex(c, s * axis.z());
  r(0, 1) = Complex(-s * axis.y(), -s * axis.x());
  r(1, 0) = Complex(s * axis.y(), -s * axis.x());
  return r;
}

/// Product over spins in `spins` of exp(-i angle n.I_s); identity elsewhere.
inline UnitaryMatrix collective_rotation(const SpinSet& spins, const Vec3& axis,
                                         double angle, int n_spins) {
  check_spin_count(n_spins);
  const ComplexMatrix r = single_spin_rotation(axis, angle);
  const ComplexMatrix id2 = identity(2);
  ComplexMatrix out = identity(1);
  for (int s = 0; s < n_spins; ++s) {
    out = kron(out, spins.contains(s) ? r : id2);
  }
  return out;
}

/// Per-spin rotation angles about a common axis.
inline UnitaryMatrix product_rotation(const std::vector<double>& angles,
                                      const Vec3& axis) {
  const int n = static_cast<int>(angles.size());
  check_spin_count(n);
  ComplexMatrix out = identity(1);
  for (int s = 0; s < n; ++s) {
    out = kron(out, single_spin_rotation(axis, angles[s]));
  }
  return out;
}

}  // namespace zfqc
