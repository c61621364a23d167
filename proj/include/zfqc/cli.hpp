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

// Command-line front end: check, design, sweep, compile, simulate.
// Exit codes: 0 success, 1 usage or parse error, 2 physics or validation
// error. Spins are named or given as 1-based indices.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zfqc/compiler.hpp"
#include "zfqc/errors.hpp"
#include "zfqc/io.hpp"
#include "zfqc/pulse_design.hpp"
#include "zfqc/sequence.hpp"
#include "zfqc/simulator.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPhysics = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::string sci(double v, int digits = 9) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

/// "1.5708", "pi/2", "-pi", "3pi/4", "0.5*pi".
inline double parse_angle(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re) || (!m[2].matched && !m[3].matched)) {
    throw UsageError("cannot parse angle '" + text + "'");
  }
  double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
  if (m[3].matched) v *= kPi;
  if (m[4].matched) {
    const double d = std::stod(m[4].str());
    if (d == 0.0) throw UsageError("division by zero in angle '" + text + "'");
    v /= d;
  }
  return m[1].str() == "-" ? -v : v;
}

inline double parse_number(const std::string& text, const std::string& what) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (text.empty() || is.fail() || !is.eof() || !std::isfinite(v)) {
    throw UsageError("cannot parse " + what + " '" + text + "'");
  }
  return v;
}

inline double parse_field_arg(const std::string& text) {
  auto v = io::parse_field(text);
  if (!v) throw UsageError("cannot parse field '" + text + "' (use e.g. 9G or 9e-4T)");
  return *v;
}

inline std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("range must be t_lo:t_hi");
  const double lo = parse_number(text.substr(0, colon), "range start");
  const double hi = parse_number(text.substr(colon + 1), "range end");
  if (!(lo >= 0.0) || !(hi > lo)) throw ValidationError("range must satisfy 0 <= t_lo < t_hi");
  return {lo, hi};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline SpinSet parse_spins(const SpinSystem& sys, const std::string& text) {
  SpinSet s;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty spin in '" + text + "'");
    s.insert(sys.index_of(part));
  }
  return s;
}

inline Vec3 parse_axis(const std::string& text) {
  if (text == "x") return Vec3::UnitX();
  if (text == "y") return Vec3::UnitY();
  if (text == "z") return Vec3::UnitZ();
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError("axis must be x, y, z or 'a,b,c'");
  Vec3 v(parse_number(parts[0], "axis"), parse_number(parts[1], "axis"),
         parse_number(parts[2], "axis"));
  if (v.norm() <= 1e-12) throw ValidationError("rotation axis has zero norm");
  return v.normalized();
}

/// A built-in name (CH, PH, CHF) or a system file.
inline SpinSystem resolve_system(const std::string& ref) {
  std::ifstream probe(ref);
  if (probe) return io::load_system(ref);
  if (auto sys = systems::builtin(ref)) return *sys;
  throw ParseError("'" + ref + "' is neither a readable file nor a built-in system (CH, PH, CHF)");
}

inline std::string set_names(const SpinSystem& sys, const SpinSet& s) {
  std::string out;
  for (int i : s.indices()) {
    if (!out.empty()) out += ",";
    out += sys.name(i);
  }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<std::pair<double, double>>& curve) {
  os << "t_seconds,fidelity\n";
  for (const auto& [t, f] : curve) os << sci(t, 12) << "," << fixed(f, 12) << "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_check(const std::string& system_ref, std::ostream& out) {
  const SpinSystem sys = detail::resolve_system(system_ref);
  const ControllabilityReport r = check_controllability(sys);
  out << "spins: " << sys.size() << "\n";
  for (int i = 0; i < sys.size(); ++i) {
    out << "  " << i + 1 << " " << sys.name(i) << " gamma=" << detail::sci(sys.gamma(i))
        << " rad/s/T\n";
  }
  out << "couplings:\n";
  for (int i = 0; i < sys.size(); ++i) {
    for (int j = i + 1; j < sys.size(); ++j) {
      if (sys.coupling(i, j) != 0.0) {
        out << "  " << sys.name(i) << "-" << sys.name(j) << " "
            << detail::fixed(sys.coupling(i, j), 4) << " Hz\n";
      }
    }
  }
  out << "components:";
  for (const auto& c : r.components) {
    out << " {";
    for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << sys.name(c[k]);
    out << "}";
  }
  out << "\nspanning_edges:";
  if (r.spanning_edges.empty()) out << " none";
  for (auto [a, b] : r.spanning_edges) out << " " << sys.name(a) << "-" << sys.name(b);
  out << "\nequal_gamma_pairs:";
  if (r.equal_gamma_pairs.empty()) out << " none";
  for (auto [a, b] : r.equal_gamma_pairs) out << " " << sys.name(a) << "-" << sys.name(b);
  out << "\nverdict: " << to_string(r.verdict) << "\n";
  return kExitOk;
}

struct DesignArgs {
  std::string system;
  std::string targets;
  std::string field = "9G";
  std::string range;
  std::string csv_out;
  int points = 0;
  int max_m = 0;
};

inline int cmd_design(const DesignArgs& a, std::ostream& out) {
  const SpinSystem sys = detail::resolve_system(a.system);
  const SpinSet targets = detail::parse_spins(sys, a.targets);
  const double b = detail::parse_field_arg(a.field);
  if (!(b > 0.0)) throw ValidationError("field amplitude must be > 0");
  double lo = 0.0, hi = 0.0;
  if (!a.range.empty()) {
    std::tie(lo, hi) = detail::parse_range(a.range);
  } else {
    double gmin = std::numeric_limits<double>::infinity();
    for (int s : targets.indices()) gmin = std::min(gmin, std::abs(sys.gamma(s)));
    hi = 2.0 * kPi / (gmin * b);
  }
  PulseSearchOptions opts;
  opts.grid_points = a.points;
  const DesignSolution d = find_pi_duration(sys, targets, b, lo, hi, opts);
  out << "targets: " << detail::set_names(sys, targets) << "\n";
  out << "field_tesla: " << detail::sci(b) << "\n";
  out << "range_seconds: " << detail::sci(lo) << ":" << detail::sci(hi) << "\n";
  out << "duration_seconds: " << detail::sci(d.duration) << "\n";
  out << "fidelity: " << detail::fixed(d.predicted_fidelity, 6) << "\n";

  const SpinSet spectators = targets.complement(sys.size());
  if (a.max_m > 0 && targets.size() == 1 && spectators.size() == 1) {
    const int t = targets.indices()[0];
    const int s = spectators.indices()[0];
    const auto r = rational_approx(std::abs(sys.gamma(t)), std::abs(sys.gamma(s)), a.max_m);
    const double tr = (2.0 * r.target_m + 1.0) * kPi / (std::abs(sys.gamma(t)) * b);
    out << "commensurability: m_target=" << r.target_m << " m_spectator=" << r.spectator_m
        << " ratio=" << (2 * r.target_m + 1) << "/" << (2 * r.spectator_m) << "\n";
    out << "commensurate_duration_seconds: " << detail::sci(tr) << "\n";
    out << "commensurate_fidelity: "
        << detail::fixed(product_fidelity(sys, targets, b, tr), 6) << "\n";
  }
  if (!a.csv_out.empty()) {
    int pts = a.points;
    if (pts == 0) {
      pts = static_cast<int>(std::ceil((hi - lo) / zfqc::default_grid_spacing(sys, b))) + 1;
    }
    std::ostringstream csv;
    detail::write_csv(csv, fidelity_curve(sys, targets, b, lo, hi, std::max(pts, 2)));
    detail::write_text(a.csv_out, csv.str());
    out << "csv: " << a.csv_out << "\n";
  }
  return kExitOk;
}

inline int cmd_sweep(const DesignArgs& a, std::ostream& out) {
  const SpinSystem sys = detail::resolve_system(a.system);
  const SpinSet targets = detail::parse_spins(sys, a.targets);
  const double b = detail::parse_field_arg(a.field);
  if (!(b > 0.0)) throw ValidationError("field amplitude must be > 0");
  if (a.range.empty()) throw UsageError("sweep needs --range t_lo:t_hi");
  const auto [lo, hi] = detail::parse_range(a.range);
  int pts = a.points;
  if (pts == 0) {
    pts = static_cast<int>(std::ceil((hi - lo) / zfqc::default_grid_spacing(sys, b))) + 1;
  }
  const auto curve = fidelity_curve(sys, targets, b, lo, hi, std::max(pts, 2));
  if (a.csv_out.empty()) {
    detail::write_csv(out, curve);
  } else {
    std::ostringstream csv;
    detail::write_csv(csv, curve);
    detail::write_text(a.csv_out, csv.str());
  }
  return kExitOk;
}

struct CompileArgs {
  std::string system;
  std::string gate;
  std::vector<std::string> params;
  std::string mode = "compiled";
  std::string field = "9G";
  double pi_window = 5e-3;
  std::string out_path;
};

inline GateSpec parse_gate_args(const SpinSystem& sys, const std::string& gate,
                                const std::vector<std::string>& p) {
  auto need = [&](std::size_t n, const char* usage) {
    if (p.size() != n) throw UsageError(std::string("usage: ") + usage);
  };
  if (gate == "identity") {
    need(0, "identity");
    return gate::Identity{};
  }
  if (gate == "single") {
    need(3, "single <spin> <axis> <angle>");
    return gate::Rotation{sys.index_of(p[0]), detail::parse_axis(p[1]),
                          detail::parse_angle(p[2])};
  }
  if (gate == "zz") {
    need(3, "zz <spin> <spin> <angle>");
    return gate::ZZ{sys.index_of(p[0]), sys.index_of(p[1]), detail::parse_angle(p[2])};
  }
  if (gate == "cnot") {
    need(2, "cnot <control> <target>");
    return gate::Cnot{sys.index_of(p[0]), sys.index_of(p[1])};
  }
  if (gate == "simul-cnot") {
    if (p.empty() || p.size() % 2 != 0) {
      throw UsageError("usage: simul-cnot <control> <target> [<control> <target> ...]");
    }
    gate::SimultaneousCnot g;
    for (std::size_t k = 0; k < p.size(); k += 2) {
      g.pairs.emplace_back(sys.index_of(p[k]), sys.index_of(p[k + 1]));
    }
    return g;
  }
  if (gate == "decouple") {
    need(3, "decouple <spin> <spin> <tau0>");
    const int i = sys.index_of(p[0]);
    const int j = sys.index_of(p[1]);
    const double tau0 = detail::parse_number(p[2], "tau0");
    if (!(tau0 > 0.0)) throw ValidationError("tau0 must be > 0");
    const double levels = std::max(0, sys.size() - 2);
    return gate::PairEvolution{{{i, j}}, tau0 * std::pow(4.0, levels)};
  }
  throw UsageError("unknown gate '" + gate +
                   "' (identity, single, zz, cnot, simul-cnot, decouple)");
}

inline int cmd_compile(const CompileArgs& a, std::ostream& out) {
  const SpinSystem sys = detail::resolve_system(a.system);
  const GateSpec spec = parse_gate_args(sys, a.gate, a.params);
  CompileOptions opts;
  const auto mode = parse_realization(a.mode);
  if (!mode) throw UsageError("mode must be ideal, compiled or full");
  opts.mode = *mode;
  opts.field_tesla = detail::parse_field_arg(a.field);
  opts.pi_window = a.pi_window;
  const Sequence seq = compile(sys, spec, opts);
  const std::string text = io::sequence_to_string(seq);
  std::ostringstream summary;
  summary << "total_duration_seconds: " << detail::sci(seq.total_duration()) << "\n";
  summary << "segments: " << seq.events.size() << " (dc_pulse " << seq.count<DcPulse>()
          << ", delay " << seq.count<Delay>() << ", ideal_gate " << seq.count<IdealGate>()
          << ")\n";
  if (a.out_path.empty()) {
    std::istringstream lines(summary.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
    out << text;
  } else {
    detail::write_text(a.out_path, text);
    out << summary.str() << "sequence: " << a.out_path << "\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string system;
  std::string sequence;
  std::string ideal = "target";
  std::string physics;
  bool json = false;
};

inline PhysicsConfig parse_physics(const std::string& text) {
  PhysicsConfig cfg;
  if (text.empty()) return cfg;
  for (const auto& f : detail::split(text, ',')) {
    if (f == "j-on") {
      cfg.include_j_during_pulses = true;
    } else if (f == "j-off") {
      cfg.include_j_during_pulses = false;
    } else if (f == "ideal-gates") {
      cfg.honor_ideal_gates = true;
    } else if (f == "no-ideal-gates") {
      cfg.honor_ideal_gates = false;
    } else {
      throw UsageError("unknown physics flag '" + f +
                       "' (j-on, j-off, ideal-gates, no-ideal-gates)");
    }
  }
  return cfg;
}

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const SpinSystem sys = detail::resolve_system(a.system);
  const Sequence seq = io::load_sequence(a.sequence, &sys);
  const PhysicsConfig cfg = parse_physics(a.physics);
  UnitaryMatrix ideal;
  if (a.ideal == "target") {
    ideal = seq.intended_target;
  } else if (a.ideal == "self") {
    ideal = simulate(sys, seq, cfg);
  } else if (a.ideal == "identity") {
    ideal = identity(sys.dimension());
  } else if (a.ideal.rfind("cnot:", 0) == 0) {
    const auto parts = detail::split(a.ideal.substr(5), ',');
    if (parts.size() != 2) throw UsageError("use --ideal cnot:<control>,<target>");
    ideal = cnot_matrix(sys.index_of(parts[0]), sys.index_of(parts[1]), sys.size());
  } else {
    ideal = io::load_matrix(a.ideal);
  }
  const FidelityReport r = evaluate_gate(sys, seq, ideal, cfg);
  if (a.json) {
    nlohmann::ordered_json j;
    j["fidelity"] = r.fidelity;
    j["total_duration_seconds"] = r.total_duration;
    j["segments"] = seq.events.size();
    j["include_j_during_pulses"] = cfg.include_j_during_pulses;
    j["honor_ideal_gates"] = cfg.honor_ideal_gates;
    for (const auto& [k, v] : r.breakdown) j["breakdown"][k] = v;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "fidelity: " << detail::fixed(r.fidelity, 6) << "\n";
  out << "total_duration_seconds: " << detail::sci(r.total_duration) << "\n";
  out << "segments: " << seq.events.size() << "\n";
  out << "physics: " << describe(cfg) << "\n";
  for (const auto& [k, v] : r.breakdown) {
    out << "fidelity[" << k << "]: " << detail::fixed(v, 6) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-field NMR gate compiler and simulator", "zfqc"};
  app.require_subcommand(1);

  std::string check_system;
  auto* check = app.add_subcommand("check", "Controllability verdict and system summary");
  check->add_option("system", check_system, "System file or built-in name")->required();

  DesignArgs design_args;
  auto* design = app.add_subcommand("design", "Find a selective pi-pulse duration");
  design->add_option("system", design_args.system, "System file or built-in name")->required();
  design->add_option("--target", design_args.targets, "Target spins, comma separated")->required();
  design->add_option("--field", design_args.field, "Field amplitude, e.g. 9G or 9e-4T");
  design->add_option("--range", design_args.range, "Duration range t_lo:t_hi in seconds");
  design->add_option("--points", design_args.points, "Grid points (0: automatic)");
  design->add_option("--max-m", design_args.max_m, "Report the best odd/even ratio up to this m");
  design->add_option("--out", design_args.csv_out, "Write the sweep CSV here");

  DesignArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Fidelity versus duration as CSV");
  sweep->add_option("system", sweep_args.system, "System file or built-in name")->required();
  sweep->add_option("--target", sweep_args.targets, "Target spins, comma separated")->required();
  sweep->add_option("--field", sweep_args.field, "Field amplitude, e.g. 9G or 9e-4T");
  sweep->add_option("--range", sweep_args.range, "Duration range t_lo:t_hi in seconds")->required();
  sweep->add_option("--points", sweep_args.points, "Grid points (0: automatic)");
  sweep->add_option("--out", sweep_args.csv_out, "Write the CSV here instead of stdout");

  CompileArgs compile_args;
  auto* comp = app.add_subcommand("compile", "Compile a gate into a pulse sequence");
  comp->add_option("system", compile_args.system, "System file or built-in name")->required();
  comp->add_option("gate", compile_args.gate,
                   "identity | single | zz | cnot | simul-cnot | decouple")->required();
  comp->add_option("params", compile_args.params, "Gate parameters");
  comp->add_option("--mode", compile_args.mode, "ideal | compiled | full");
  comp->add_option("--field", compile_args.field, "DC pulse amplitude, e.g. 9G");
  comp->add_option("--pi-window", compile_args.pi_window,
                   "Upper bound of the selective pi-pulse search, seconds");
  comp->add_option("--out", compile_args.out_path, "Write the sequence here");
  // Negative angles such as -pi/2 look like options; collect them as params.
  comp->allow_extras();

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate a sequence and report its gate fidelity");
  sim->add_option("system", sim_args.system, "System file or built-in name")->required();
  sim->add_option("sequence", sim_args.sequence, "Sequence file")->required();
  sim->add_option("--ideal", sim_args.ideal,
                  "target | self | identity | cnot:<c>,<t> | matrix file");
  sim->add_option("--physics", sim_args.physics,
                  "Comma list of j-on, j-off, ideal-gates, no-ideal-gates");
  sim->add_flag("--json", sim_args.json, "Print a JSON record");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_system, out);
    if (design->parsed()) return cmd_design(design_args, out);
    if (sweep->parsed()) return cmd_sweep(sweep_args, out);
    if (comp->parsed()) {
      for (const auto& extra : comp->remaining()) {
        if (extra != "--") compile_args.params.push_back(extra);
      }
      return cmd_compile(compile_args, out);
    }
    if (sim->parsed()) return cmd_simulate(sim_args, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  }
  return kExitUsage;
}

}  // namespace zfqc::cli
