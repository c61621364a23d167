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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zfqc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = zfqc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ZFQC_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zfqc_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string line_with(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (line.rfind(key, 0) == 0) return line.substr(key.size());
  }
  return {};
}

}  // namespace

TEST(CliCheck, Verdicts) {
  auto r = run({"check", "CHF"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(line_with(r.out, "verdict: "), "controllable");
  r = run({"check", data("chf.yaml")});
  EXPECT_EQ(line_with(r.out, "verdict: "), "controllable");
  r = run({"check", data("uncoupled.yaml")});
  EXPECT_EQ(line_with(r.out, "verdict: "), "not_controllable");
}

TEST(CliCheck, MalformedFile) {
  const fs::path p = scratch("bad.yaml");
  std::ofstream(p) << "spins:\n  - {name: C, species: 13C, colour: red}\n";
  const auto r = run({"check", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run({"check", "no_such_system"}).code, 1);
}

TEST(CliDesign, CarbonPulse) {
  const auto r = run({"design", "CH", "--target", "C", "--field", "9G", "--max-m", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(line_with(r.out, "commensurate_duration_seconds: ")), 5.19e-5, 0.01e-5);
  EXPECT_NEAR(std::stod(line_with(r.out, "commensurate_fidelity: ")), 0.9994, 1e-4);
  EXPECT_NEAR(std::stod(line_with(r.out, "duration_seconds: ")), 5.2e-5, 0.05e-5);
  EXPECT_GE(std::stod(line_with(r.out, "fidelity: ")), 0.9994);
}

TEST(CliDesign, PhosphorusWindow) {
  const auto r = run({"design", data("ph.yaml"), "--target", "P", "--range", "5.3e-4:5.7e-4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(line_with(r.out, "duration_seconds: ")), 5.48e-4, 0.01e-4);
  EXPECT_NEAR(std::stod(line_with(r.out, "fidelity: ")), 0.9998, 2e-4);
}

TEST(CliDesign, Errors) {
  EXPECT_EQ(run({"design", "CH", "--target", "Q"}).code, 2);
  EXPECT_EQ(run({"design", "CH", "--target", "C", "--range", "2e-4:1e-4"}).code, 2);
  EXPECT_EQ(run({"design", "CH", "--target", "C", "--field", "nine"}).code, 1);
  EXPECT_EQ(run({"design", "CH"}).code, 1);
}

TEST(CliSweep, CsvFormat) {
  const auto r = run({"sweep", "CHF", "--target", "F", "--range", "1.9e-4:2.3e-4", "--points", "41"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t_seconds,fidelity");
  double prev = -1.0;
  int rows = 0;
  while (std::getline(is, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    EXPECT_GT(t, prev);
    prev = t;
    ++rows;
  }
  EXPECT_EQ(rows, 41);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(CliCompile, CnotDelays) {
  const fs::path p = scratch("cnot.yaml");
  const auto r = run({"compile", "CHF", "cnot", "C", "H", "--mode", "ideal", "--out", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("delay 8"), std::string::npos);
  const zfqc::SpinSystem sys = zfqc::systems::chf();
  const zfqc::Sequence s = zfqc::io::load_sequence(p.string(), &sys);
  for (const auto& e : s.events) {
    if (const auto* d = std::get_if<zfqc::Delay>(&e)) EXPECT_EQ(d->duration, 1.0 / (16 * 160.7));
  }
}

TEST(CliCompile, SingleQubitFirstSegment) {
  const auto r = run({"compile", "CHF", "single", "C", "z", "pi/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const zfqc::Sequence s = zfqc::io::sequence_from_string(r.out);
  EXPECT_NEAR(std::get<zfqc::DcPulse>(s.events.at(0)).duration, 12.9e-6, 0.1e-6);
}

TEST(CliCompile, IdentityAndNegativeAngle) {
  auto r = run({"compile", "CHF", "identity"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(zfqc::io::sequence_from_string(r.out).events.empty());
  r = run({"compile", "CHF", "single", "H", "x", "-pi/2", "--mode", "ideal"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::get<zfqc::IdealGate>(zfqc::io::sequence_from_string(r.out).events.at(0)).angle,
              -zfqc::kPi / 2, 1e-15);
}

TEST(CliCompile, Errors) {
  EXPECT_EQ(run({"compile", data("uncoupled.yaml"), "cnot", "1", "2"}).code, 2);
  EXPECT_EQ(run({"compile", "CHF", "toffoli", "1", "2"}).code, 1);
  EXPECT_EQ(run({"compile", "CHF", "cnot", "C"}).code, 1);
  EXPECT_EQ(run({"compile", "CHF", "cnot", "C", "H", "--mode", "fast"}).code, 1);
}

TEST(CliSimulate, ReportsAndRoundTrip) {
  const fs::path p = scratch("cnot_sim.yaml");
  ASSERT_EQ(run({"compile", "CHF", "cnot", "1", "2", "--mode", "ideal", "--out", p.string()}).code, 0);
  auto r = run({"simulate", "CHF", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_with(r.out, "fidelity: "), "0.995451");
  r = run({"simulate", "CHF", p.string(), "--ideal", "cnot:C,H"});
  EXPECT_EQ(line_with(r.out, "fidelity: "), "0.995451");
  r = run({"simulate", "CHF", p.string(), "--ideal", "self"});
  EXPECT_EQ(line_with(r.out, "fidelity: "), "1.000000");
  r = run({"simulate", "CHF", p.string(), "--json"});
  EXPECT_NE(r.out.find("\"fidelity\": 0.99545134231"), std::string::npos);
  r = run({"simulate", "CHF", p.string(), "--physics", "no-ideal-gates"});
  EXPECT_EQ(r.code, 2);
  r = run({"simulate", "CH", p.string()});
  EXPECT_EQ(r.code, 1);
}

TEST(CliSimulate, MatrixFileIdeal) {
  const fs::path seq = scratch("id.yaml");
  const fs::path mat = scratch("m.yaml");
  ASSERT_EQ(run({"compile", "CH", "identity", "--out", seq.string()}).code, 0);
  std::ofstream(mat) << zfqc::io::matrix_to_string(zfqc::identity(4));
  auto r = run({"simulate", "CH", seq.string(), "--ideal", mat.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_with(r.out, "fidelity: "), "1.000000");
  std::ofstream(mat) << zfqc::io::matrix_to_string(zfqc::identity(2));
  EXPECT_EQ(run({"simulate", "CH", seq.string(), "--ideal", mat.string()}).code, 2);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"compile", "CHF", "cnot", "C", "H", "--mode", "full"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
