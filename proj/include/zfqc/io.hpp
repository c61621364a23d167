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

// YAML formats for spin systems, pulse sequences and matrices. Spins are
// 1-based in files. Unknown keys are rejected with their position.
//
//   # system
//   spins:
//     - {name: C, species: 13C}
//     - {name: X, gamma: 1.0e7}
//   couplings:
//     - {spins: [C, X], hz: 160.7}
//
//   # sequence
//   spins: 3
//   target: {gate: cnot, control: 1, target: 2}
//   events:
//     - {kind: dc_pulse, field: [0, 0, 9G], duration: 1.2e-5}
//     - {kind: delay, duration: 3.9e-4}
//     - {kind: ideal_gate, spins: [1, 2], axis: [1, 0, 0], angle: 3.14159}

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/sequence.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc::io {

namespace detail {

[[noreturn]] inline void fail(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ParseError(msg);
  throw ParseError(msg, m.line + 1, m.column + 1);
}

inline void require_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) fail(node, what + " must be a mapping");
}

inline void require_seq(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list");
}

inline void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed,
                       const std::string& what) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(kv.first, "unknown key '" + key + "' in " + what);
  }
}

inline YAML::Node required(const YAML::Node& node, const char* key, const std::string& what) {
  YAML::Node v = node[key];
  if (!v) fail(node, what + " is missing '" + key + "'");
  return v;
}

inline double to_double(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a number");
  const std::string s = node.Scalar();
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !is.eof()) fail(node, what + " is not a number: '" + s + "'");
  if (!std::isfinite(v)) fail(node, what + " must be finite");
  return v;
}

inline long to_int(const YAML::Node& node, const std::string& what) {
  const double v = to_double(node, what);
  if (v != std::floor(v)) fail(node, what + " must be an integer");
  return static_cast<long>(v);
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// Parses "9G", "0.9 mT", "9e-4T" or a bare number (tesla).
inline std::optional<double> parse_field(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  double scale = 1.0;
  auto strip = [&](std::string_view suffix, double f) {
    if (s.size() > suffix.size() &&
        s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
      scale = f;
      return true;
    }
    return false;
  };
  strip("mT", 1e-3) || strip("uT", 1e-6) || strip("mG", 1e-7) ||
      strip("T", 1.0) || strip("G", 1e-4);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (s.empty() || is.fail() || !is.eof() || !std::isfinite(v)) return std::nullopt;
  return v * scale;
}

namespace detail {

inline double to_field(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a scalar");
  auto v = parse_field(node.Scalar());
  if (!v) fail(node, what + " is not a field value: '" + node.Scalar() + "'");
  return *v;
}

inline Vec3 to_vec3(const YAML::Node& node, const std::string& what) {
  require_seq(node, what);
  if (node.size() != 3) fail(node, what + " must have 3 components");
  return Vec3(to_double(node[0], what), to_double(node[1], what), to_double(node[2], what));
}

inline int spin_ref(const YAML::Node& node, int n, const std::string& what) {
  const long v = to_int(node, what);
  if (v < 1 || v > n) {
    fail(node, what + " " + std::to_string(v) + " out of range 1.." + std::to_string(n));
  }
  return static_cast<int>(v - 1);
}

inline std::pair<int, int> spin_pair(const YAML::Node& node, int n, const std::string& what) {
  require_seq(node, what);
  if (node.size() != 2) fail(node, what + " must list two spins");
  return {spin_ref(node[0], n, what), spin_ref(node[1], n, what)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Spin systems

inline SpinSystem parse_system(const YAML::Node& root) {
  using namespace detail;
  require_map(root, "system");
  check_keys(root, {"spins", "couplings"}, "system");
  const YAML::Node spins = required(root, "spins", "system");
  require_seq(spins, "spins");
  std::vector<std::string> names;
  std::vector<double> gammas;
  for (const auto& s : spins) {
    require_map(s, "spin");
    check_keys(s, {"name", "species", "gamma"}, "spin");
    if (s["species"] && s["gamma"]) fail(s, "spin gives both 'species' and 'gamma'");
    double g = 0.0;
    std::string label;
    if (s["species"]) {
      label = s["species"].as<std::string>();
      auto sg = species_gamma(label);
      if (!sg) fail(s["species"], "unknown species '" + label + "'");
      g = *sg;
    } else if (s["gamma"]) {
      g = to_double(s["gamma"], "gamma");
    } else {
      fail(s, "spin needs 'species' or 'gamma'");
    }
    if (s["name"]) {
      label = s["name"].as<std::string>();
    } else if (label.empty()) {
      label = std::to_string(names.size() + 1);
    }
    names.push_back(label);
    gammas.push_back(g);
  }
  const int n = static_cast<int>(names.size());
  if (n < 1 || n > kMaxSpins) fail(spins, "spin count must be 1.." + std::to_string(kMaxSpins));

  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  if (const YAML::Node cs = root["couplings"]) {
    require_seq(cs, "couplings");
    for (const auto& c : cs) {
      require_map(c, "coupling");
      check_keys(c, {"spins", "hz"}, "coupling");
      const YAML::Node pair = required(c, "spins", "coupling");
      require_seq(pair, "coupling spins");
      if (pair.size() != 2) fail(pair, "coupling must name two spins");
      int idx[2];
      for (int k = 0; k < 2; ++k) {
        const std::string ref = pair[k].as<std::string>();
        int found = -1;
        for (int s = 0; s < n; ++s) {
          if (names[s] == ref) found = s;
        }
        if (found < 0) {
          std::istringstream is(ref);
          int v = 0;
          if (is >> v && is.eof() && v >= 1 && v <= n) found = v - 1;
        }
        if (found < 0) fail(pair[k], "unknown spin '" + ref + "'");
        idx[k] = found;
      }
      if (idx[0] == idx[1]) fail(pair, "a spin cannot couple to itself");
      if (j(idx[0], idx[1]) != 0.0) fail(c, "duplicate coupling");
      const double hz = to_double(required(c, "hz", "coupling"), "hz");
      j(idx[0], idx[1]) = j(idx[1], idx[0]) = hz;
    }
  }
  try {
    return SpinSystem(names, gammas, j);
  } catch (const ValidationError& e) {
    fail(root, e.what());
  }
}

inline YAML::Node load_yaml_text(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1,
                     e.mark.is_null() ? 0 : e.mark.column + 1);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpinSystem system_from_string(const std::string& text) {
  return parse_system(load_yaml_text(text));
}

inline SpinSystem load_system(const std::string& path) {
  return system_from_string(read_file(path));
}

inline std::string system_to_string(const SpinSystem& sys) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap << YAML::Key << "spins" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < sys.size(); ++i) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value
        << sys.name(i) << YAML::Key << "gamma" << YAML::Value << sys.gamma(i)
        << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::Key << "couplings" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < sys.size(); ++i) {
    for (int k = i + 1; k < sys.size(); ++k) {
      if (sys.coupling(i, k) == 0.0) continue;
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "spins" << YAML::Value
          << YAML::Flow << YAML::BeginSeq << i + 1 << k + 1 << YAML::EndSeq
          << YAML::Key << "hz" << YAML::Value << sys.coupling(i, k) << YAML::EndMap;
    }
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Matrices: {re: [[...]], im: [[...]]}

inline ComplexMatrix parse_matrix(const YAML::Node& node) {
  using namespace detail;
  require_map(node, "matrix");
  check_keys(node, {"re", "im"}, "matrix");
  const YAML::Node re = required(node, "re", "matrix");
  require_seq(re, "re");
  const int rows = static_cast<int>(re.size());
  if (rows == 0) fail(re, "matrix is empty");
  ComplexMatrix m = ComplexMatrix::Zero(rows, rows);
  auto fill = [&](const YAML::Node& part, bool imag) {
    require_seq(part, imag ? "im" : "re");
    if (static_cast<int>(part.size()) != rows) fail(part, "matrix must be square");
    for (int r = 0; r < rows; ++r) {
      require_seq(part[r], "matrix row");
      if (static_cast<int>(part[r].size()) != rows) fail(part[r], "matrix must be square");
      for (int c = 0; c < rows; ++c) {
        const double v = to_double(part[r][c], "matrix entry");
        if (imag) {
          m(r, c) += Complex(0.0, v);
        } else {
          m(r, c) += Complex(v, 0.0);
        }
      }
    }
  };
  fill(re, false);
  if (node["im"]) fill(node["im"], true);
  return m;
}

inline ComplexMatrix load_matrix(const std::string& path) {
  return parse_matrix(load_yaml_text(read_file(path)));
}

namespace detail {

inline void emit_matrix(YAML::Emitter& out, const ComplexMatrix& m) {
  out << YAML::BeginMap;
  for (bool imag : {false, true}) {
    out << YAML::Key << (imag ? "im" : "re") << YAML::Value << YAML::BeginSeq;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out << YAML::Flow << YAML::BeginSeq;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out << (imag ? m(r, c).imag() : m(r, c).real());
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

}  // namespace detail

inline std::string matrix_to_string(const ComplexMatrix& m) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  detail::emit_matrix(out, m);
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Gate specs

inline GateSpec parse_gate(const YAML::Node& node, int n) {
  using namespace detail;
  require_map(node, "target");
  const std::string kind = required(node, "gate", "target").as<std::string>();
  if (kind == "identity") {
    check_keys(node, {"gate"}, "identity target");
    return gate::Identity{};
  }
  if (kind == "rotation") {
    check_keys(node, {"gate", "spin", "axis", "angle"}, "rotation target");
    gate::Rotation g;
    g.spin = spin_ref(required(node, "spin", "rotation"), n, "spin");
    g.axis = to_vec3(required(node, "axis", "rotation"), "axis");
    if (g.axis.norm() <= 1e-12) fail(node["axis"], "axis has zero norm");
    g.axis.normalize();
    g.angle = to_double(required(node, "angle", "rotation"), "angle");
    return g;
  }
  if (kind == "zz") {
    check_keys(node, {"gate", "spins", "angle"}, "zz target");
    auto [i, j] = spin_pair(required(node, "spins", "zz"), n, "spins");
    return gate::ZZ{i, j, to_double(required(node, "angle", "zz"), "angle")};
  }
  if (kind == "cnot") {
    check_keys(node, {"gate", "control", "target"}, "cnot target");
    return gate::Cnot{spin_ref(required(node, "control", "cnot"), n, "control"),
                      spin_ref(required(node, "target", "cnot"), n, "target")};
  }
  if (kind == "simultaneous_cnot" || kind == "pair_evolution") {
    const bool sc = kind == "simultaneous_cnot";
    if (sc) {
      check_keys(node, {"gate", "pairs"}, kind);
    } else {
      check_keys(node, {"gate", "pairs", "time"}, kind);
    }
    const YAML::Node ps = required(node, "pairs", kind);
    require_seq(ps, "pairs");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : ps) pairs.push_back(spin_pair(p, n, "pair"));
    if (sc) return gate::SimultaneousCnot{pairs};
    return gate::PairEvolution{pairs, to_double(required(node, "time", kind), "time")};
  }
  if (kind == "matrix") {
    check_keys(node, {"gate", "re", "im"}, "matrix target");
    YAML::Node m;
    m["re"] = node["re"];
    if (node["im"]) m["im"] = node["im"];
    ComplexMatrix v = parse_matrix(m);
    if (v.rows() != dimension_for(n)) fail(node, "matrix dimension does not match spin count");
    return gate::Matrix{v};
  }
  fail(node["gate"], "unknown gate '" + kind + "'");
}

namespace detail {

inline void emit_gate(YAML::Emitter& out, const GateSpec& spec) {
  out << YAML::BeginMap;
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        auto vec = [&](const Vec3& v) {
          out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
        };
        auto pairs = [&](const std::vector<std::pair<int, int>>& ps) {
          out << YAML::Key << "pairs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
          for (auto [a, b] : ps) out << YAML::BeginSeq << a + 1 << b + 1 << YAML::EndSeq;
          out << YAML::EndSeq;
        };
        if constexpr (std::is_same_v<G, gate::Identity>) {
          out << YAML::Key << "gate" << YAML::Value << "identity";
        } else if constexpr (std::is_same_v<G, gate::Rotation>) {
          out << YAML::Key << "gate" << YAML::Value << "rotation";
          out << YAML::Key << "spin" << YAML::Value << g.spin + 1;
          out << YAML::Key << "axis" << YAML::Value;
          vec(g.axis);
          out << YAML::Key << "angle" << YAML::Value << g.angle;
        } else if constexpr (std::is_same_v<G, gate::ZZ>) {
          out << YAML::Key << "gate" << YAML::Value << "zz";
          out << YAML::Key << "spins" << YAML::Value << YAML::Flow << YAML::BeginSeq
              << g.i + 1 << g.j + 1 << YAML::EndSeq;
          out << YAML::Key << "angle" << YAML::Value << g.angle;
        } else if constexpr (std::is_same_v<G, gate::Cnot>) {
          out << YAML::Key << "gate" << YAML::Value << "cnot";
          out << YAML::Key << "control" << YAML::Value << g.control + 1;
          out << YAML::Key << "target" << YAML::Value << g.target + 1;
        } else if constexpr (std::is_same_v<G, gate::SimultaneousCnot>) {
          out << YAML::Key << "gate" << YAML::Value << "simultaneous_cnot";
          pairs(g.pairs);
        } else if constexpr (std::is_same_v<G, gate::PairEvolution>) {
          out << YAML::Key << "gate" << YAML::Value << "pair_evolution";
          pairs(g.pairs);
          out << YAML::Key << "time" << YAML::Value << g.time;
        } else {
          out << YAML::Key << "gate" << YAML::Value << "matrix";
          for (bool imag : {false, true}) {
            out << YAML::Key << (imag ? "im" : "re") << YAML::Value << YAML::BeginSeq;
            for (Eigen::Index r = 0; r < g.value.rows(); ++r) {
              out << YAML::Flow << YAML::BeginSeq;
              for (Eigen::Index c = 0; c < g.value.cols(); ++c) {
                out << (imag ? g.value(r, c).imag() : g.value(r, c).real());
              }
              out << YAML::EndSeq;
            }
            out << YAML::EndSeq;
          }
        }
      },
      spec);
  out << YAML::EndMap;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sequences

/// Parses a sequence; the intended target is resolved against `sys` when
/// given, otherwise only gates not needing couplings are resolved.
inline Sequence parse_sequence(const YAML::Node& root, const SpinSystem* sys = nullptr) {
  using namespace detail;
  require_map(root, "sequence");
  check_keys(root, {"spins", "target", "events", "metadata"}, "sequence");
  Sequence seq;
  const YAML::Node ns = required(root, "spins", "sequence");
  const long n = to_int(ns, "spins");
  if (n < 1 || n > kMaxSpins) fail(ns, "spins must be 1.." + std::to_string(kMaxSpins));
  seq.n_spins = static_cast<int>(n);
  if (sys && sys->size() != seq.n_spins) {
    fail(ns, "sequence is for " + std::to_string(n) + " spins but the system has " +
                 std::to_string(sys->size()));
  }
  if (const YAML::Node t = root["target"]) seq.target = parse_gate(t, seq.n_spins);

  if (const YAML::Node evs = root["events"]) {
    require_seq(evs, "events");
    for (const auto& e : evs) {
      require_map(e, "event");
      const std::string kind = required(e, "kind", "event").as<std::string>();
      PulseEvent ev;
      if (kind == "dc_pulse") {
        check_keys(e, {"kind", "field", "duration"}, "dc_pulse");
        const YAML::Node f = required(e, "field", "dc_pulse");
        require_seq(f, "field");
        if (f.size() != 3) fail(f, "field must have 3 components");
        ev = DcPulse{FieldVector{to_field(f[0], "field"), to_field(f[1], "field"),
                                 to_field(f[2], "field")},
                     to_double(required(e, "duration", "dc_pulse"), "duration")};
      } else if (kind == "delay") {
        check_keys(e, {"kind", "duration"}, "delay");
        ev = Delay{to_double(required(e, "duration", "delay"), "duration")};
      } else if (kind == "ideal_gate") {
        check_keys(e, {"kind", "spins", "axis", "angle"}, "ideal_gate");
        IdealGate g;
        const YAML::Node ss = required(e, "spins", "ideal_gate");
        require_seq(ss, "spins");
        for (const auto& s : ss) g.spins.insert(spin_ref(s, seq.n_spins, "spin"));
        g.axis = to_vec3(required(e, "axis", "ideal_gate"), "axis");
        g.angle = to_double(required(e, "angle", "ideal_gate"), "angle");
        ev = g;
      } else {
        fail(e["kind"], "unknown event kind '" + kind + "'");
      }
      try {
        validate_event(ev, seq.n_spins);
      } catch (const ValidationError& err) {
        fail(e, err.what());
      }
      seq.events.push_back(std::move(ev));
    }
  }
  if (const YAML::Node md = root["metadata"]) {
    require_map(md, "metadata");
    for (const auto& kv : md) {
      seq.metadata[kv.first.as<std::string>()] = kv.second.as<std::string>();
    }
  }
  if (sys) seq.intended_target = target_unitary(seq.target, *sys);
  return seq;
}

inline Sequence sequence_from_string(const std::string& text, const SpinSystem* sys = nullptr) {
  return parse_sequence(load_yaml_text(text), sys);
}

inline Sequence load_sequence(const std::string& path, const SpinSystem* sys = nullptr) {
  return sequence_from_string(read_file(path), sys);
}

inline std::string sequence_to_string(const Sequence& seq) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "spins" << YAML::Value << seq.n_spins;
  out << YAML::Key << "target" << YAML::Value;
  detail::emit_gate(out, seq.target);
  if (!seq.metadata.empty()) {
    out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : seq.metadata) {
      out << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "events" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : seq.events) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << kind_name(e);
    if (const auto* p = std::get_if<DcPulse>(&e)) {
      out << YAML::Key << "field" << YAML::Value << YAML::BeginSeq << p->field.x
          << p->field.y << p->field.z << YAML::EndSeq;
      out << YAML::Key << "duration" << YAML::Value << p->duration;
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      out << YAML::Key << "duration" << YAML::Value << d->duration;
    } else {
      const auto& g = std::get<IdealGate>(e);
      out << YAML::Key << "spins" << YAML::Value << YAML::BeginSeq;
      for (int s : g.spins.indices()) out << s + 1;
      out << YAML::EndSeq;
      out << YAML::Key << "axis" << YAML::Value << YAML::BeginSeq << g.axis.x()
          << g.axis.y() << g.axis.z() << YAML::EndSeq;
      out << YAML::Key << "angle" << YAML::Value << g.angle;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace zfqc::io
