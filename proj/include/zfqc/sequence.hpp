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

#include <cmath>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc {

inline constexpr double kAxisNormTolerance = 1e-12;

/// Constant DC field applied for `duration` seconds.
struct DcPulse {
  FieldVector field;
  double duration = 0.0;
};

/// Free evolution under the zero-field Hamiltonian.
struct Delay {
  double duration = 0.0;
};

/// Placeholder for exp(-i angle n.I_s) on every spin s in `spins`. Either
/// honored as an exact unitary or rejected by the simulator.
struct IdealGate {
  SpinSet spins;
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

using PulseEvent = std::variant<DcPulse, Delay, IdealGate>;

inline double duration_of(const PulseEvent& e) {
  return std::visit(
      [](const auto& ev) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(ev)>, IdealGate>) {
          return 0.0;
        } else {
          return ev.duration;
        }
      },
      e);
}

inline std::string kind_name(const PulseEvent& e) {
  switch (e.index()) {
    case 0: return "dc_pulse";
    case 1: return "delay";
    default: return "ideal_gate";
  }
}

inline void validate_event(const PulseEvent& e, int n_spins) {
  if (const auto* p = std::get_if<DcPulse>(&e)) {
    if (!(p->duration >= 0.0) || !std::isfinite(p->duration)) {
      throw ValidationError("dc_pulse duration must be finite and >= 0");
    }
    if (!p->field.finite()) throw ValidationError("dc_pulse field must be finite");
  } else if (const auto* d = std::get_if<Delay>(&e)) {
    if (!(d->duration >= 0.0) || !std::isfinite(d->duration)) {
      throw ValidationError("delay duration must be finite and >= 0");
    }
  } else {
    const auto& g = std::get<IdealGate>(e);
    if (std::abs(g.axis.norm() - 1.0) > kAxisNormTolerance) {
      throw ValidationError("ideal_gate axis must be a unit vector");
    }
    if (!std::isfinite(g.angle)) throw ValidationError("ideal_gate angle must be finite");
    if (g.spins.empty()) throw ValidationError("ideal_gate needs at least one spin");
    for (int s : g.spins.indices()) {
      if (s >= n_spins) {
        throw ValidationError("ideal_gate spin " + std::to_string(s + 1) +
                              " out of range");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Gate targets

namespace gate {

struct Identity {};

/// exp(-i angle n.I_spin)
struct Rotation {
  int spin = 0;
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

/// Two-spin ZZ block built from two free evolutions around a pi_z on `j`,
/// each of length angle / (2 pi |J_ij|).
struct ZZ {
  int i = 0;
  int j = 1;
  double angle = 0.0;
};

struct Cnot {
  int control = 0;
  int target = 1;
};

/// CNOTs on disjoint (control, target) pairs, applied together.
struct SimultaneousCnot {
  std::vector<std::pair<int, int>> pairs;
};

/// exp(-i time sum_p H0^(p)) over the listed pairs: what a decoupling block
/// retains at zero order.
struct PairEvolution {
  std::vector<std::pair<int, int>> pairs;
  double time = 0.0;
};

struct Matrix {
  ComplexMatrix value;
};

}  // namespace gate

using GateSpec = std::variant<gate::Identity, gate::Rotation, gate::ZZ,
                              gate::Cnot, gate::SimultaneousCnot,
                              gate::PairEvolution, gate::Matrix>;

/// Standard CNOT on (control, target), identity on all other spins.
inline UnitaryMatrix cnot_matrix(int control, int target, int n_spins) {
  const int dim = dimension_for(n_spins);
  if (control == target || control < 0 || target < 0 || control >= n_spins ||
      target >= n_spins) {
    throw ValidationError("invalid CNOT spin pair");
  }
  const int cbit = 1 << (n_spins - 1 - control);
  const int tbit = 1 << (n_spins - 1 - target);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    // |1> is the I_z = -1/2 state, i.e. a set bit.
    const int row = (col & cbit) ? (col ^ tbit) : col;
    u(row, col) = 1.0;
  }
  return u;
}

inline UnitaryMatrix target_unitary(const GateSpec& spec, const SpinSystem& sys) {
  const int n = sys.size();
  const int dim = sys.dimension();
  struct Visitor {
    const SpinSystem& sys;
    int n;
    int dim;
    UnitaryMatrix operator()(const gate::Identity&) const { return identity(dim); }
    UnitaryMatrix operator()(const gate::Rotation& g) const {
      sys.check_index(g.spin);
      return collective_rotation(SpinSet{g.spin}, g.axis.normalized(), g.angle, n);
    }
    UnitaryMatrix operator()(const gate::ZZ& g) const {
      // exp(-i H t) pi_z exp(-i H t) pi_z^dagger = exp(-i 4 pi J t Iz Iz),
      // with t = angle / (2 pi |J|).
      const double j = sys.coupling(g.i, g.j);
      if (j == 0.0) throw ValidationError("ZZ block needs a nonzero coupling");
      const double phase = 2.0 * g.angle * (j > 0 ? 1.0 : -1.0);
      const ComplexMatrix zz = spin_operator(g.i, Axis::z, n) *
                               spin_operator(g.j, Axis::z, n);
      ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
      for (int k = 0; k < dim; ++k) u(k, k) = std::polar(1.0, -phase * zz(k, k).real());
      return u;
    }
    UnitaryMatrix operator()(const gate::Cnot& g) const {
      return cnot_matrix(g.control, g.target, n);
    }
    UnitaryMatrix operator()(const gate::SimultaneousCnot& g) const {
      UnitaryMatrix u = identity(dim);
      for (auto [c, t] : g.pairs) u = cnot_matrix(c, t, n) * u;
      return u;
    }
    UnitaryMatrix operator()(const gate::PairEvolution& g) const {
      return expm_hermitian(pairs_hamiltonian(sys, g.pairs), g.time);
    }
    UnitaryMatrix operator()(const gate::Matrix& g) const {
      if (g.value.rows() != dim || g.value.cols() != dim) {
        throw ValidationError("target matrix dimension " +
                              std::to_string(g.value.rows()) +
                              " does not match system dimension " +
                              std::to_string(dim));
      }
      return g.value;
    }
  };
  return std::visit(Visitor{sys, n, dim}, spec);
}

/// Ordered events, first applied first, plus the gate they are meant to
/// realize.
struct Sequence {
  int n_spins = 0;
  std::vector<PulseEvent> events;
  GateSpec target = gate::Identity{};
  UnitaryMatrix intended_target;
  std::map<std::string, std::string> metadata;

  double total_duration() const {
    double t = 0.0;
    for (const auto& e : events) t += duration_of(e);
    return t;
  }

  template <class Kind>
  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& e : events) c += std::holds_alternative<Kind>(e) ? 1 : 0;
    return c;
  }

  void validate() const {
    for (const auto& e : events) validate_event(e, n_spins);
  }
};

/// Events with order reversed and every field and angle negated. Without
/// delays this realizes the inverse unitary.
inline Sequence reversed(const Sequence& seq) {
  Sequence out;
  out.n_spins = seq.n_spins;
  out.intended_target = seq.intended_target.adjoint();
  out.target = gate::Matrix{out.intended_target};
  out.metadata = seq.metadata;
  for (auto it = seq.events.rbegin(); it != seq.events.rend(); ++it) {
    PulseEvent e = *it;
    if (auto* p = std::get_if<DcPulse>(&e)) p->field = -p->field;
    if (auto* g = std::get_if<IdealGate>(&e)) g->angle = -g->angle;
    out.events.push_back(e);
  }
  return out;
}

}  // namespace zfqc
