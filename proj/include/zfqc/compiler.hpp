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

// Gate -> pulse-sequence compilation.
//
// Single-spin rotations use the two-half echo: spectators see the field
// reversed between the halves by a pi pulse about an axis perpendicular to
// the rotation axis, so their phases cancel while the target's add up.
// Two-spin gates use the ZZ block (free evolution, pi_z on the target, free
// evolution) inside the CNOT factorization, and the free evolutions are
// replaced by concatenated decoupling cycles when other spins are present.

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/pulse_design.hpp"
#include "zfqc/sequence.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc {

/// How gate factors are realized.
///   ideal:    every rotation and pi pulse is an ideal_gate placeholder.
///   compiled: single-qubit rotations and the ZZ refocusing pulse become DC
///             pulses; pi pulses of the decoupling cycles stay ideal.
///   full:     decoupling pi pulses become designed DC pulses as well.
enum class GateRealization { ideal, compiled, full };

inline std::string_view to_string(GateRealization m) {
  switch (m) {
    case GateRealization::ideal: return "ideal";
    case GateRealization::compiled: return "compiled";
    case GateRealization::full: return "full";
  }
  return "ideal";
}

inline std::optional<GateRealization> parse_realization(std::string_view s) {
  if (s == "ideal") return GateRealization::ideal;
  if (s == "compiled") return GateRealization::compiled;
  if (s == "full") return GateRealization::full;
  return std::nullopt;
}

struct CompileOptions {
  GateRealization mode = GateRealization::ideal;
  double field_tesla = 9e-4;  // amplitude of every DC pulse
  double pi_window = 5e-3;    // selective pi pulses are searched in (0, pi_window]
  PulseSearchOptions search;
};

/// Selective pi pulses designed on demand for each target set and memoized.
/// Not shared between compilations.
class PiPulseLibrary {
 public:
  PiPulseLibrary(const SpinSystem& sys, double field_tesla, double window,
                 PulseSearchOptions search = {})
      : sys_(sys), field_(field_tesla), window_(window), search_(search) {
    if (!(field_tesla > 0.0)) throw ValidationError("field amplitude must be > 0");
    if (!(window > 0.0)) throw ValidationError("pi-pulse search window must be > 0");
  }

  const DesignSolution& get(const SpinSet& targets) {
    auto it = cache_.find(targets);
    if (it == cache_.end()) {
      it = cache_
               .emplace(targets, find_pi_duration(sys_, targets, field_, 0.0,
                                                  window_, search_))
               .first;
    }
    return it->second;
  }

  const std::map<SpinSet, DesignSolution>& designs() const { return cache_; }

 private:
  const SpinSystem& sys_;
  double field_;
  double window_;
  PulseSearchOptions search_;
  std::map<SpinSet, DesignSolution> cache_;
};

/// Deterministic axis orthogonal to n: z when n has no z component,
/// otherwise the z-free vector (-n_y, n_x, 0), falling back to x for n = +-z.
inline Vec3 perpendicular_axis(const Vec3& n) {
  if (std::abs(n.z()) <= 1e-12) return Vec3::UnitZ();
  Vec3 p(-n.y(), n.x(), 0.0);
  if (p.norm() <= 1e-12) return Vec3::UnitX();
  return p.normalized();
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string spin_list(const SpinSystem& sys, const SpinSet& s) {
  std::string out;
  for (int i : s.indices()) {
    if (!out.empty()) out += ",";
    out += sys.name(i);
  }
  return out;
}

// True when a single pulse turning `spin` by `angle` turns every other spin
// by a nonzero multiple of 2 pi.
inline bool spectators_commensurate(const SpinSystem& sys, int spin, double angle) {
  const double base = std::abs(angle) / std::abs(sys.gamma(spin)) / (2.0 * kPi);
  for (int k = 0; k < sys.size(); ++k) {
    if (k == spin) continue;
    const double turns = std::abs(sys.gamma(k)) * base;
    if (std::abs(turns - std::round(turns)) > 1e-9 || std::round(turns) == 0.0) return false;
  }
  return true;
}

// Accumulates events for one compilation.
class Emitter {
 public:
  Emitter(const SpinSystem& sys, const CompileOptions& opts)
      : sys_(sys),
        opts_(opts),
        library_(sys, opts.field_tesla, opts.pi_window, opts.search) {}

  const SpinSystem& system() const { return sys_; }
  const CompileOptions& options() const { return opts_; }
  std::vector<PulseEvent>& events() { return events_; }
  PiPulseLibrary& library() { return library_; }

  void delay(double t) {
    if (t > 0.0) events_.push_back(Delay{t});
  }

  // Collective pi rotation of `spins` about a coordinate axis; sign -1 emits
  // the inverse.
  void pi_pulse(const SpinSet& spins, Axis axis, int sign, bool decoupling) {
    if (spins.empty()) return;
    const bool ideal = opts_.mode == GateRealization::ideal ||
                       (decoupling && opts_.mode == GateRealization::compiled);
    if (ideal) {
      events_.push_back(IdealGate{spins, axis_vector(axis), sign * kPi});
      return;
    }
    const DesignSolution& d = library_.get(spins);
    events_.push_back(DcPulse{
        FieldVector::along(axis_vector(axis), sign * d.amplitude()), d.duration});
  }

  bool spectators_commensurate(int spin, double angle) const {
    return detail::spectators_commensurate(sys_, spin, angle);
  }

  // Two-half echo for exp(-i angle n.I_spin). `spectator_pi` is used for the
  // spectator pi pulses; nullopt emits them as ideal placeholders. When the
  // spectators already return to themselves the echo collapses to one pulse.
  void echo_rotation(int spin, Vec3 axis, double angle, double field,
                     const std::optional<DesignSolution>& spectator_pi) {
    const double gamma = sys_.gamma(spin);
    const double full = std::abs(angle) / (std::abs(gamma) * field);
    const double half = full / 2.0;
    // exp(-i tau H_DC(F)) rotates spin k by -gamma_k tau |F| about F.
    const double s = (angle * gamma > 0) ? -1.0 : 1.0;
    const FieldVector f = FieldVector::along(axis, s * field);
    const SpinSet spectators = SpinSet{spin}.complement(sys_.size());
    if (spectators.empty() || spectators_commensurate(spin, angle)) {
      events_.push_back(DcPulse{f, full});
      return;
    }
    const DcPulse half_pulse{f, half};
    const Vec3 perp = perpendicular_axis(axis);

    auto spectator_flip = [&](int sign) {
      if (spectators.empty()) return;
      if (spectator_pi) {
        events_.push_back(DcPulse{
            FieldVector::along(perp, sign * spectator_pi->amplitude()),
            spectator_pi->duration});
      } else {
        events_.push_back(IdealGate{spectators, perp, sign * kPi});
      }
    };
    // Operator order: Pi . D . Pi^dagger . D
    events_.push_back(half_pulse);
    spectator_flip(-1);
    events_.push_back(half_pulse);
    spectator_flip(+1);
  }

  // A single-qubit factor of a larger construction.
  void rotation(int spin, Vec3 axis, double angle) {
    if (angle == 0.0) return;
    if (opts_.mode == GateRealization::ideal) {
      events_.push_back(IdealGate{SpinSet{spin}, axis, angle});
      return;
    }
    std::optional<DesignSolution> pi;
    const SpinSet spectators = SpinSet{spin}.complement(sys_.size());
    if (!spectators.empty() && !spectators_commensurate(spin, angle)) {
      pi = library_.get(spectators);
    }
    echo_rotation(spin, axis, angle, opts_.field_tesla, pi);
  }

  // Concatenated decoupling that keeps only the couplings inside `keep`
  // pairs for an effective time `t`. Blocks are the kept pairs followed by
  // the remaining spins; level k pulses block k-1, so every coupling between
  // different blocks is switched off at zero order. Returns the level count.
  int decoupling_block(const std::vector<std::pair<int, int>>& keep, double t) {
    std::vector<SpinSet> blocks;
    SpinSet used;
    for (auto [i, j] : keep) {
      blocks.push_back(SpinSet{i, j});
      used = used | SpinSet{i, j};
    }
    for (int s : used.complement(sys_.size()).indices()) blocks.push_back(SpinSet{s});
    const int levels = std::max(0, static_cast<int>(blocks.size()) - 1);
    if (t <= 0.0) return levels;
    const double tau0 = t / std::pow(4.0, levels);
    emit_level(blocks, levels, tau0);
    return levels;
  }

 private:
  // P_k = [P_{k-1}] Z [P_{k-1}] X [P_{k-1}] Z^dagger [P_{k-1}] X^dagger in
  // operator order; emitted chronologically (rightmost first).
  void emit_level(const std::vector<SpinSet>& blocks, int level, double tau0) {
    if (level == 0) {
      delay(tau0);
      return;
    }
    const SpinSet& set = blocks[level - 1];
    pi_pulse(set, Axis::x, -1, true);
    emit_level(blocks, level - 1, tau0);
    pi_pulse(set, Axis::z, -1, true);
    emit_level(blocks, level - 1, tau0);
    pi_pulse(set, Axis::x, +1, true);
    emit_level(blocks, level - 1, tau0);
    pi_pulse(set, Axis::z, +1, true);
    emit_level(blocks, level - 1, tau0);
  }

  const SpinSystem& sys_;
  CompileOptions opts_;
  PiPulseLibrary library_;
  std::vector<PulseEvent> events_;
};

inline Sequence finish(const SpinSystem& sys, std::vector<PulseEvent> events,
                       GateSpec target,
                       std::map<std::string, std::string> metadata) {
  Sequence seq;
  seq.n_spins = sys.size();
  seq.events = std::move(events);
  seq.intended_target = target_unitary(target, sys);
  seq.target = std::move(target);
  seq.metadata = std::move(metadata);
  seq.validate();
  return seq;
}

inline void record_designs(const SpinSystem& sys, const PiPulseLibrary& lib,
                           std::map<std::string, std::string>& meta) {
  for (const auto& [set, d] : lib.designs()) {
    meta["pi_pulse[" + spin_list(sys, set) + "]"] =
        "duration=" + fmt_double(d.duration) +
        " predicted_fidelity=" + fmt_double(d.predicted_fidelity);
  }
}

inline void check_pair(const SpinSystem& sys, int i, int j) {
  sys.check_index(i);
  sys.check_index(j);
  if (i == j) throw ValidationError("a spin pair needs two distinct spins");
  if (sys.coupling(i, j) == 0.0) {
    throw ValidationError("spins " + sys.name(i) + " and " + sys.name(j) +
                          " are not coupled (J = 0)");
  }
}

}  // namespace detail

/// exp(-i angle n.I_spin) by the two-half echo with DC field `field_tesla`.
/// The spectator pi pulses use `spectator_pi` (its targets must be every
/// spin except `spin`), or ideal placeholders when it is empty.
inline Sequence compile_single_qubit(
    const SpinSystem& sys, int spin, const Vec3& axis, double angle,
    double field_tesla, const std::optional<DesignSolution>& spectator_pi) {
  sys.check_index(spin);
  if (axis.norm() <= 1e-12) throw ValidationError("rotation axis has zero norm");
  if (!std::isfinite(angle) || std::abs(angle) > 4.0 * kPi) {
    throw ValidationError("rotation angle must lie in [-4 pi, 4 pi]");
  }
  if (!(field_tesla > 0.0)) throw ValidationError("field amplitude must be > 0");
  const Vec3 n = axis.normalized();
  const SpinSet spectators = SpinSet{spin}.complement(sys.size());
  if (spectator_pi && spectator_pi->targets != spectators) {
    throw ValidationError("spectator pi pulse must target every other spin");
  }

  CompileOptions opts;
  opts.field_tesla = field_tesla;
  detail::Emitter em(sys, opts);
  std::map<std::string, std::string> meta;
  meta["construction"] = "echo";
  if (angle != 0.0) em.echo_rotation(spin, n, angle, field_tesla, spectator_pi);

  double weakest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sys.size(); ++k) {
    if (k == spin || sys.coupling(spin, k) == 0.0) continue;
    weakest = std::min(weakest, field_tesla * std::abs(sys.gamma(spin)) /
                                    (2.0 * kPi * std::abs(sys.coupling(spin, k))));
  }
  meta["assumption"] = "J couplings neglected during DC pulses";
  if (std::isfinite(weakest)) {
    meta["field_to_coupling_ratio"] = detail::fmt_double(weakest);
  }
  if (spectator_pi) {
    meta["pi_pulse[" + detail::spin_list(sys, spectators) + "]"] =
        "duration=" + detail::fmt_double(spectator_pi->duration) +
        " predicted_fidelity=" + detail::fmt_double(spectator_pi->predicted_fidelity);
  }
  return detail::finish(sys, std::move(em.events()),
                        gate::Rotation{spin, n, angle}, std::move(meta));
}

/// Single-qubit rotation under `opts`: an ideal placeholder in ideal mode,
/// otherwise the echo with a spectator pi pulse designed over
/// (0, opts.pi_window].
inline Sequence compile_single_qubit(const SpinSystem& sys, int spin,
                                     const Vec3& axis, double angle,
                                     const CompileOptions& opts) {
  if (opts.mode == GateRealization::ideal) {
    sys.check_index(spin);
    if (axis.norm() <= 1e-12) throw ValidationError("rotation axis has zero norm");
    if (!std::isfinite(angle) || std::abs(angle) > 4.0 * kPi) {
      throw ValidationError("rotation angle must lie in [-4 pi, 4 pi]");
    }
    std::vector<PulseEvent> events;
    if (angle != 0.0) events.push_back(IdealGate{SpinSet{spin}, axis.normalized(), angle});
    return detail::finish(sys, std::move(events),
                          gate::Rotation{spin, axis.normalized(), angle},
                          {{"mode", "ideal"}});
  }
  std::optional<DesignSolution> pi;
  const SpinSet spectators = SpinSet{spin}.complement(sys.size());
  if (!spectators.empty() && angle != 0.0 &&
      !detail::spectators_commensurate(sys, spin, angle)) {
    pi = find_pi_duration(sys, spectators, opts.field_tesla, 0.0, opts.pi_window,
                          opts.search);
  }
  Sequence seq = compile_single_qubit(sys, spin, axis, angle, opts.field_tesla, pi);
  seq.metadata["mode"] = std::string(to_string(opts.mode));
  return seq;
}

/// Concatenated decoupling keeping only H0^(i,j): P_0 = delay(tau0) and
/// n - 2 levels of [P]Z[P]X[P]Z^dagger[P]X^dagger, i.e. 4^(n-2) delays whose
/// zero-order average is exp(-i 4^(n-2) tau0 H0^(i,j)).
inline Sequence compile_decoupling(const SpinSystem& sys, std::pair<int, int> keep,
                                   double tau0, const CompileOptions& opts = {}) {
  if (sys.size() < 2) throw ValidationError("decoupling needs at least 2 spins");
  detail::check_pair(sys, keep.first, keep.second);
  if (!(tau0 > 0.0)) throw ValidationError("tau0 must be > 0");
  detail::Emitter em(sys, opts);
  const int levels = std::max(0, sys.size() - 2);
  const double effective = tau0 * std::pow(4.0, levels);
  em.decoupling_block({keep}, effective);
  std::map<std::string, std::string> meta;
  meta["mode"] = std::string(to_string(opts.mode));
  meta["levels"] = std::to_string(levels);
  meta["tau0"] = detail::fmt_double(tau0);
  meta["zero_order_hamiltonian"] =
      "4^" + std::to_string(levels) + " * tau0 * H0(" + sys.name(keep.first) +
      "," + sys.name(keep.second) + ")";
  detail::record_designs(sys, em.library(), meta);
  return detail::finish(sys, std::move(em.events()),
                        gate::PairEvolution{{keep}, effective}, std::move(meta));
}

/// ZZ block exp(-i H t) U_z^j(pi) exp(-i H t) U_z^j(pi)^dagger with
/// t = angle / (2 pi |J_ij|); for more than two spins each free evolution is
/// a decoupling block retaining only H0^(i,j).
inline Sequence compile_uzz(const SpinSystem& sys, int i, int j, double angle,
                            const CompileOptions& opts = {}) {
  detail::check_pair(sys, i, j);
  if (!(angle >= 0.0) || !std::isfinite(angle)) {
    throw ValidationError("ZZ angle must be finite and >= 0");
  }
  detail::Emitter em(sys, opts);
  const double t = angle / (2.0 * kPi * std::abs(sys.coupling(i, j)));
  int levels = 0;
  if (angle > 0.0) {
    em.pi_pulse(SpinSet{j}, Axis::z, -1, false);
    levels = em.decoupling_block({{i, j}}, t);
    em.pi_pulse(SpinSet{j}, Axis::z, +1, false);
    em.decoupling_block({{i, j}}, t);
  }
  std::map<std::string, std::string> meta;
  meta["mode"] = std::string(to_string(opts.mode));
  meta["evolution_time_per_half"] = detail::fmt_double(t);
  meta["levels"] = std::to_string(levels);
  detail::record_designs(sys, em.library(), meta);
  return detail::finish(sys, std::move(em.events()), gate::ZZ{i, j, angle},
                        std::move(meta));
}

/// CNOTs on disjoint (control, target) pairs realized together.
///
/// Per pair with J > 0 (operator order):
///   CNOT = sqrt(i) U_z^c(pi/2) U_z^t(-pi/2) U_x^t(pi/2) U_zz(pi/2) U_y^t(pi/2)
/// and for J < 0 the adjoint factorization, whose ZZ block is the J > 0 one
/// conjugated. Free evolutions run with all pairs active for the fastest
/// pair's time 1/(4|J|), then the slower pairs continue alone.
inline Sequence compile_simultaneous_cnot(
    const SpinSystem& sys, const std::vector<std::pair<int, int>>& pairs,
    const CompileOptions& opts = {}) {
  if (pairs.empty()) throw ValidationError("no CNOT pairs given");
  SpinSet used;
  SpinSet targets;
  for (auto [c, t] : pairs) {
    detail::check_pair(sys, c, t);
    const SpinSet p{c, t};
    if (used.intersects(p)) throw ValidationError("CNOT pairs must be disjoint");
    used = used | p;
    targets.insert(t);
  }

  detail::Emitter em(sys, opts);
  const Vec3 x = Vec3::UnitX(), y = Vec3::UnitY(), z = Vec3::UnitZ();
  constexpr double q = kPi / 2.0;
  auto positive = [&](int c, int t) { return sys.coupling(c, t) > 0.0; };

  // Leading single-qubit factors.
  for (auto [c, t] : pairs) {
    if (positive(c, t)) {
      em.rotation(t, y, q);
    } else {
      em.rotation(c, z, -q);
      em.rotation(t, z, q);
      em.rotation(t, x, -q);
    }
  }

  // Evolution schedule per half: (duration, active pairs).
  std::vector<std::pair<double, std::pair<int, int>>> by_time;
  for (auto p : pairs) {
    by_time.push_back({1.0 / (4.0 * std::abs(sys.coupling(p.first, p.second))), p});
  }
  std::stable_sort(by_time.begin(), by_time.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<double, std::vector<std::pair<int, int>>>> schedule;
  double elapsed = 0.0;
  for (std::size_t k = 0; k < by_time.size(); ++k) {
    const double dt = by_time[k].first - elapsed;
    if (dt > 0.0) {
      std::vector<std::pair<int, int>> active;
      for (std::size_t r = k; r < by_time.size(); ++r) active.push_back(by_time[r].second);
      schedule.push_back({dt, active});
      elapsed = by_time[k].first;
    }
  }
  auto half = [&] {
    int levels = 0;
    for (const auto& [dt, active] : schedule) {
      levels = std::max(levels, em.decoupling_block(active, dt));
    }
    return levels;
  };
  em.pi_pulse(targets, Axis::z, -1, false);
  const int levels = half();
  em.pi_pulse(targets, Axis::z, +1, false);
  half();

  // Trailing single-qubit factors.
  for (auto [c, t] : pairs) {
    if (positive(c, t)) {
      em.rotation(t, x, q);
      em.rotation(t, z, -q);
      em.rotation(c, z, q);
    } else {
      em.rotation(t, y, -q);
    }
  }

  std::map<std::string, std::string> meta;
  meta["mode"] = std::string(to_string(opts.mode));
  meta["global_phase"] = "sqrt(i)^" + std::to_string(pairs.size()) + " (not realized)";
  meta["assumption"] = "J couplings neglected during DC pulses";
  meta["levels"] = std::to_string(levels);
  {
    std::string sched;
    for (const auto& [dt, active] : schedule) {
      if (!sched.empty()) sched += "; ";
      sched += detail::fmt_double(dt) + " s:";
      for (auto [c, t] : active) sched += " " + sys.name(c) + "-" + sys.name(t);
    }
    meta["evolution_schedule"] = sched;
  }
  const double fastest = by_time.front().first;
  meta["tau0"] = detail::fmt_double(fastest / std::pow(4.0, levels));
  detail::record_designs(sys, em.library(), meta);

  GateSpec target;
  if (pairs.size() == 1) {
    target = gate::Cnot{pairs[0].first, pairs[0].second};
  } else {
    target = gate::SimultaneousCnot{pairs};
  }
  return detail::finish(sys, std::move(em.events()), std::move(target),
                        std::move(meta));
}

inline Sequence compile_cnot(const SpinSystem& sys, int control, int target,
                             const CompileOptions& opts = {}) {
  return compile_simultaneous_cnot(sys, {{control, target}}, opts);
}

/// Dispatches on the gate kind. Arbitrary matrices are not synthesized.
inline Sequence compile(const SpinSystem& sys, const GateSpec& spec,
                        const CompileOptions& opts = {}) {
  struct Visitor {
    const SpinSystem& sys;
    const CompileOptions& opts;
    Sequence operator()(const gate::Identity&) const {
      return detail::finish(sys, {}, gate::Identity{},
                            {{"mode", std::string(to_string(opts.mode))}});
    }
    Sequence operator()(const gate::Rotation& g) const {
      return compile_single_qubit(sys, g.spin, g.axis, g.angle, opts);
    }
    Sequence operator()(const gate::ZZ& g) const {
      return compile_uzz(sys, g.i, g.j, g.angle, opts);
    }
    Sequence operator()(const gate::Cnot& g) const {
      return compile_cnot(sys, g.control, g.target, opts);
    }
    Sequence operator()(const gate::SimultaneousCnot& g) const {
      return compile_simultaneous_cnot(sys, g.pairs, opts);
    }
    Sequence operator()(const gate::PairEvolution& g) const {
      if (g.pairs.empty()) throw ValidationError("no pairs to retain");
      for (auto [i, j] : g.pairs) detail::check_pair(sys, i, j);
      detail::Emitter em(sys, opts);
      const int levels = em.decoupling_block(g.pairs, g.time);
      std::map<std::string, std::string> meta{
          {"mode", std::string(to_string(opts.mode))},
          {"levels", std::to_string(levels)},
          {"tau0", detail::fmt_double(g.time / std::pow(4.0, levels))}};
      detail::record_designs(sys, em.library(), meta);
      return detail::finish(sys, std::move(em.events()), g, std::move(meta));
    }
    Sequence operator()(const gate::Matrix&) const {
      throw ValidationError("arbitrary matrices cannot be compiled");
    }
  };
  return std::visit(Visitor{sys, opts}, spec);
}

}  // namespace zfqc
