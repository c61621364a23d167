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

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"

namespace zfqc {

/// Gyromagnetic ratios in rad s^-1 T^-1.
struct Species {
  std::string_view symbol;   // isotope label, e.g. "13C"
  std::string_view element;  // element label, e.g. "C"
  double gamma;
};

inline constexpr std::array<Species, 4> kSpeciesTable{{
    {"1H", "H", 267.513e6},
    {"13C", "C", 67.262e6},
    {"19F", "F", 251.662e6},
    {"31P", "P", 108.291e6},
}};

/// Accepts either the isotope ("13C") or the bare element ("C").
inline std::optional<double> species_gamma(std::string_view label) {
  for (const auto& s : kSpeciesTable) {
    if (label == s.symbol || label == s.element) return s.gamma;
  }
  return std::nullopt;
}

/// Static field, tesla.
struct FieldVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static FieldVector along(const Vec3& axis, double magnitude) {
    return {axis.x() * magnitude + 0.0, axis.y() * magnitude + 0.0,
            axis.z() * magnitude + 0.0};
  }
  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return vec().norm(); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
  FieldVector operator-() const { return {0.0 - x, 0.0 - y, 0.0 - z}; }
  FieldVector operator+(const FieldVector& o) const {
    return {x + o.x, y + o.y, z + o.z};
  }
  friend bool operator==(const FieldVector&, const FieldVector&) = default;
};

/// Liquid-state spin-1/2 network: labels, gyromagnetic ratios and the
/// symmetric scalar-coupling matrix (Hz, zero diagonal). Immutable.
class SpinSystem {
 public:
  SpinSystem(std::vector<std::string> names, std::vector<double> gammas,
             Eigen::MatrixXd couplings_hz)
      : names_(std::move(names)),
        gammas_(std::move(gammas)),
        couplings_(std::move(couplings_hz)) {
    const int n = static_cast<int>(gammas_.size());
    check_spin_count(n);
    if (static_cast<int>(names_.size()) != n) {
      throw ValidationError("spin names and gyromagnetic ratios differ in length");
    }
    if (couplings_.rows() != n || couplings_.cols() != n) {
      throw ValidationError("coupling matrix must be " + std::to_string(n) +
                            "x" + std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(gammas_[i]) || gammas_[i] == 0.0) {
        throw ValidationError("gyromagnetic ratio of spin '" + names_[i] +
                              "' must be finite and nonzero");
      }
      if (couplings_(i, i) != 0.0) {
        throw ValidationError("coupling matrix diagonal must be zero");
      }
      for (int j = 0; j < n; ++j) {
        if (!std::isfinite(couplings_(i, j)) ||
            couplings_(i, j) != couplings_(j, i)) {
          throw ValidationError("coupling matrix must be finite and symmetric");
        }
      }
      for (int j = 0; j < i; ++j) {
        if (names_[i] == names_[j]) {
          throw ValidationError("duplicate spin name '" + names_[i] + "'");
        }
      }
    }
  }

  int size() const { return static_cast<int>(gammas_.size()); }
  int dimension() const { return 1 << size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<double>& gammas() const { return gammas_; }
  double gamma(int i) const { return gammas_.at(i); }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  double coupling(int i, int j) const {
    check_index(i);
    check_index(j);
    return couplings_(i, j);
  }

  void check_index(int i) const {
    if (i < 0 || i >= size()) {
      throw ValidationError("spin index " + std::to_string(i + 1) +
                            " out of range 1.." + std::to_string(size()));
    }
  }

  /// Resolves a spin by name, or by a 1-based index written as text.
  int index_of(std::string_view label) const {
    for (int i = 0; i < size(); ++i) {
      if (names_[i] == label) return i;
    }
    if (!label.empty() &&
        std::all_of(label.begin(), label.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      const int k = std::stoi(std::string(label));
      check_index(k - 1);
      return k - 1;
    }
    throw ValidationError("unknown spin '" + std::string(label) + "'");
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> gammas_;
  Eigen::MatrixXd couplings_;
};

/// Builds a system from element labels and a list of (i, j, J_Hz) with 0-based
/// indices.
inline SpinSystem make_system(
    const std::vector<std::string>& species,
    const std::vector<std::tuple<int, int, double>>& couplings) {
  const int n = static_cast<int>(species.size());
  std::vector<double> gammas;
  for (const auto& s : species) {
    auto g = species_gamma(s);
    if (!g) throw ValidationError("unknown species '" + s + "'");
    gammas.push_back(*g);
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b, hz] : couplings) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw ValidationError("invalid coupling pair");
    }
    j(a, b) = hz;
    j(b, a) = hz;
  }
  return SpinSystem(species, std::move(gammas), std::move(j));
}

namespace systems {

// 13C-1H pair of formic acid; 1J(CH) = 222 Hz.
inline SpinSystem ch() { return make_system({"C", "H"}, {{0, 1, 222.0}}); }

// 31P-1H pair; the coupling only matters for simulations with J active.
inline SpinSystem ph() { return make_system({"P", "H"}, {{0, 1, 650.0}}); }

// Diethyl fluoromalonate, 13C-1H-19F.
inline SpinSystem chf() {
  return make_system({"C", "H", "F"},
                     {{0, 1, 160.7}, {0, 2, -194.4}, {1, 2, 47.6}});
}

inline std::optional<SpinSystem> builtin(std::string_view name) {
  if (name == "CH") return ch();
  if (name == "PH") return ph();
  if (name == "CHF") return chf();
  return std::nullopt;
}

}  // namespace systems

/// 2 pi J_ij I_i . I_j
inline ComplexMatrix pair_hamiltonian(const SpinSystem& sys, int i, int j) {
  sys.check_index(i);
  sys.check_index(j);
  const int n = sys.size();
  ComplexMatrix h = ComplexMatrix::Zero(sys.dimension(), sys.dimension());
  if (i == j || sys.coupling(i, j) == 0.0) return h;
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    h += spin_operator(i, a, n) * spin_operator(j, a, n);
  }
  return 2.0 * kPi * sys.coupling(i, j) * h;
}

/// Zero-field Hamiltonian sum_{i<j} 2 pi J_ij I_i . I_j, rad/s.
inline ComplexMatrix zero_field_hamiltonian(const SpinSystem& sys) {
  ComplexMatrix h = ComplexMatrix::Zero(sys.dimension(), sys.dimension());
  for (int i = 0; i < sys.size(); ++i) {
    for (int j = i + 1; j < sys.size(); ++j) h += pair_hamiltonian(sys, i, j);
  }
  return h;
}

/// Sum of the pair Hamiltonians for the listed (i, j) pairs.
inline ComplexMatrix pairs_hamiltonian(
    const SpinSystem& sys, const std::vector<std::pair<int, int>>& pairs) {
  ComplexMatrix h = ComplexMatrix::Zero(sys.dimension(), sys.dimension());
  for (auto [i, j] : pairs) h += pair_hamiltonian(sys, i, j);
  return h;
}

/// DC-field Hamiltonian -sum_i gamma_i B . I_i, rad/s.
inline ComplexMatrix dc_hamiltonian(const SpinSystem& sys, const FieldVector& b) {
  if (!b.finite()) throw ValidationError("field vector must be finite");
  const int n = sys.size();
  ComplexMatrix h = ComplexMatrix::Zero(sys.dimension(), sys.dimension());
  for (int i = 0; i < n; ++i) {
    h -= sys.gamma(i) * spin_projection(i, b.vec(), n);
  }
  return h;
}

enum class Controllability { controllable, not_controllable, unknown };

inline std::string_view to_string(Controllability c) {
  switch (c) {
    case Controllability::controllable: return "controllable";
    case Controllability::not_controllable: return "not_controllable";
    case Controllability::unknown: return "unknown";
  }
  return "unknown";
}

struct ControllabilityReport {
  Controllability verdict = Controllability::unknown;
  // Connected components of the nonzero-J graph (0-based spin indices).
  std::vector<std::vector<int>> components;
  // Spanning forest of the coupling graph: the connectivity witness.
  std::vector<std::pair<int, int>> spanning_edges;
  // Pairs with identical gyromagnetic ratios.
  std::vector<std::pair<int, int>> equal_gamma_pairs;
};

/// Connected nonzero-J graph plus pairwise-distinct gamma => controllable.
/// A disconnected graph is never controllable. Connected with some equal
/// gammas falls outside the criterion and is reported as unknown.
inline ControllabilityReport check_controllability(const SpinSystem& sys) {
  const int n = sys.size();
  ControllabilityReport r;
  std::vector<int> component(n, -1);
  for (int start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    const int id = static_cast<int>(r.components.size());
    r.components.emplace_back();
    std::vector<int> queue{start};
    component[start] = id;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int u = queue[q];
      r.components.back().push_back(u);
      for (int v = 0; v < n; ++v) {
        if (v != u && component[v] < 0 && sys.coupling(u, v) != 0.0) {
          component[v] = id;
          r.spanning_edges.emplace_back(u, v);
          queue.push_back(v);
        }
      }
    }
    std::sort(r.components.back().begin(), r.components.back().end());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (sys.gamma(i) == sys.gamma(j)) r.equal_gamma_pairs.emplace_back(i, j);
    }
  }
  if (r.components.size() > 1) {
    r.verdict = Controllability::not_controllable;
  } else if (!r.equal_gamma_pairs.empty()) {
    r.verdict = Controllability::unknown;
  } else {
    r.verdict = Controllability::controllable;
  }
  return r;
}

}  // namespace zfqc
