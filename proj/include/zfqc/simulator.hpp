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

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zfqc/compiler.hpp"
#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/sequence.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc {

struct PhysicsConfig {
  bool include_j_during_pulses = false;
  bool honor_ideal_gates = true;
};

inline std::string describe(const PhysicsConfig& cfg) {
  return std::string("j_during_pulses=") + (cfg.include_j_during_pulses ? "on" : "off") +
         " ideal_gates=" + (cfg.honor_ideal_gates ? "honored" : "rejected");
}

namespace detail {

// Eigendecompositions per distinct Hamiltonian, local to one simulate call.
class PropagatorCache {
 public:
  PropagatorCache(const SpinSystem& sys, const PhysicsConfig& cfg)
      : sys_(sys), cfg_(cfg), h0_(zero_field_hamiltonian(sys)) {}

  UnitaryMatrix delay(double t) {
    if (!free_) free_.emplace(h0_);
    return free_->at(t);
  }

  UnitaryMatrix pulse(const FieldVector& b, double t) {
    const std::array<double, 3> key{b.x, b.y, b.z};
    auto it = pulses_.find(key);
    if (it == pulses_.end()) {
      ComplexMatrix h = dc_hamiltonian(sys_, b);
      if (cfg_.include_j_during_pulses) h += h0_;
      it = pulses_.emplace(key, HermitianPropagator(h)).first;
    }
    return it->second.at(t);
  }

 private:
  const SpinSystem& sys_;
  PhysicsConfig cfg_;
  ComplexMatrix h0_;
  std::optional<HermitianPropagator> free_;
  std::map<std::array<double, 3>, HermitianPropagator> pulses_;
};

}  // namespace detail

/// Ordered product E_N ... E_1 of the segment propagators.
inline UnitaryMatrix simulate(const SpinSystem& sys, const Sequence& seq,
                              const PhysicsConfig& cfg = {}) {
  if (seq.n_spins != sys.size()) {
    throw ValidationError("sequence is for " + std::to_string(seq.n_spins) +
                          " spins but the system has " + std::to_string(sys.size()));
  }
  seq.validate();
  const int n = sys.size();
  detail::PropagatorCache cache(sys, cfg);
  UnitaryMatrix u = identity(sys.dimension());
  for (const auto& e : seq.events) {
    if (const auto* p = std::get_if<DcPulse>(&e)) {
      u = cache.pulse(p->field, p->duration) * u;
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      u = cache.delay(d->duration) * u;
    } else {
      const auto& g = std::get<IdealGate>(e);
      if (!cfg.honor_ideal_gates) {
        throw ValidationError("sequence contains ideal_gate placeholders");
      }
      u = collective_rotation(g.spins, g.axis, g.angle, n) * u;
    }
  }
  return u;
}

struct FidelityReport {
  double fidelity = 0.0;
  UnitaryMatrix realized;
  UnitaryMatrix ideal;
  PhysicsConfig config;
  double total_duration = 0.0;
  // Fidelity with J switched off / on during DC pulses.
  std::vector<std::pair<std::string, double>> breakdown;
};

inline FidelityReport evaluate_gate(const SpinSystem& sys, const Sequence& seq,
                                    const UnitaryMatrix& ideal,
                                    const PhysicsConfig& cfg = {}) {
  FidelityReport r;
  r.realized = simulate(sys, seq, cfg);
  if (ideal.rows() != r.realized.rows() || ideal.cols() != r.realized.cols()) {
    throw ValidationError("ideal unitary dimension " + std::to_string(ideal.rows()) +
                          " does not match system dimension " +
                          std::to_string(r.realized.rows()));
  }
  r.ideal = ideal;
  r.config = cfg;
  r.total_duration = seq.total_duration();
  r.fidelity = gate_fidelity(ideal, r.realized);

  PhysicsConfig other = cfg;
  other.include_j_during_pulses = !cfg.include_j_during_pulses;
  const double f_other = gate_fidelity(ideal, simulate(sys, seq, other));
  const double f_off = cfg.include_j_during_pulses ? f_other : r.fidelity;
  const double f_on = cfg.include_j_during_pulses ? r.fidelity : f_other;
  r.breakdown = {{"j_off_during_pulses", f_off}, {"j_on_during_pulses", f_on}};
  return r;
}

/// H0 + sum_{a in x,y,z} U_a(theta) H0 U_a(theta)^dagger, where U_a rotates
/// spin k by theta[k] about axis a.
inline ComplexMatrix average_hamiltonian_check(const SpinSystem& sys,
                                               const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != sys.size()) {
    throw ValidationError("need one angle per spin");
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw ValidationError("angles must be finite");
  }
  const ComplexMatrix h0 = zero_field_hamiltonian(sys);
  ComplexMatrix sum = h0;
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const UnitaryMatrix u = product_rotation(theta, axis_vector(a));
    sum += u * h0 * u.adjoint();
  }
  return sum;
}

enum class CouplingSwitch { on, off, indeterminate };

inline std::string_view to_string(CouplingSwitch s) {
  switch (s) {
    case CouplingSwitch::on: return "on";
    case CouplingSwitch::off: return "off";
    default: return "indeterminate";
  }
}

/// on when theta_i - theta_j is an even multiple of pi, off when odd,
/// indeterminate otherwise.
inline CouplingSwitch coupling_switch(double theta_i, double theta_j,
                                      double tol = 1e-9) {
  const double k = (theta_i - theta_j) / kPi;
  const double r = std::round(k);
  if (std::abs(k - r) > tol) return CouplingSwitch::indeterminate;
  return (static_cast<long long>(r) % 2 == 0) ? CouplingSwitch::on
                                              : CouplingSwitch::off;
}

/// Sum of 4 H0^(i,j) over the switched-on pairs. Throws when a coupled
/// pair is indeterminate.
inline ComplexMatrix predicted_average_hamiltonian(const SpinSystem& sys,
                                                   const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != sys.size()) {
    throw ValidationError("need one angle per spin");
  }
  ComplexMatrix h = ComplexMatrix::Zero(sys.dimension(), sys.dimension());
  for (int i = 0; i < sys.size(); ++i) {
    for (int j = i + 1; j < sys.size(); ++j) {
      if (sys.coupling(i, j) == 0.0) continue;
      switch (coupling_switch(theta[i], theta[j])) {
        case CouplingSwitch::on: h += 4.0 * pair_hamiltonian(sys, i, j); break;
        case CouplingSwitch::off: break;
        default:
          throw ValidationError("angle difference for spins " + sys.name(i) +
                                " and " + sys.name(j) +
                                " is not an integer multiple of pi");
      }
    }
  }
  return h;
}

/// Frobenius distance between the conjugation sum and the on/off prediction.
inline double dichotomy_defect(const SpinSystem& sys, const std::vector<double>& theta) {
  return (average_hamiltonian_check(sys, theta) -
          predicted_average_hamiltonian(sys, theta))
      .norm();
}

struct TrotterPoint {
  int m = 1;
  double fidelity = 0.0;
};

/// Repeats the decoupling block m times with step tau0/m (ideal pi pulses)
/// and compares with exp(-i 4^(n-2) tau0 H0^(keep)) under the full H0.
inline std::vector<TrotterPoint> trotter_convergence_probe(
    const SpinSystem& sys, std::pair<int, int> keep, double tau0,
    const std::vector<int>& subdivisions) {
  const int levels = std::max(0, sys.size() - 2);
  const UnitaryMatrix target =
      expm_hermitian(pair_hamiltonian(sys, keep.first, keep.second),
                     std::pow(4.0, levels) * tau0);
  CompileOptions opts;
  opts.mode = GateRealization::ideal;
  std::vector<TrotterPoint> out;
  for (int m : subdivisions) {
    if (m < 1) throw ValidationError("subdivisions must be >= 1");
    const Sequence block = compile_decoupling(sys, keep, tau0 / m, opts);
    const UnitaryMatrix step = simulate(sys, block);
    UnitaryMatrix u = identity(sys.dimension());
    for (int r = 0; r < m; ++r) u = step * u;
    out.push_back({m, gate_fidelity(target, u)});
  }
  return out;
}

}  // namespace zfqc
