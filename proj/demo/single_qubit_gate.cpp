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

// pi/2 z rotation on the carbon of the C-H-F system, built from two DC
// half-pulses and designed spectator pi pulses at 9 G.

#include <iomanip>
#include <iostream>

#include "zfqc/zfqc.hpp"

int main() {
  using namespace zfqc;
  const SpinSystem sys = systems::chf();
  CompileOptions opts;
  opts.mode = GateRealization::compiled;
  const Sequence seq = compile_single_qubit(sys, 0, Vec3::UnitZ(), kPi / 2, opts);

  std::cout << std::setprecision(6);
  std::cout << "events:\n";
  for (const auto& e : seq.events) {
    std::cout << "  " << kind_name(e);
    if (const auto* p = std::get_if<DcPulse>(&e)) {
      std::cout << " field=(" << p->field.x << ", " << p->field.y << ", " << p->field.z
                << ") T  t=" << p->duration * 1e6 << " us";
    }
    std::cout << "\n";
  }
  const FidelityReport r = evaluate_gate(sys, seq, seq.intended_target);
  std::cout << "total duration: " << r.total_duration * 1e3 << " ms\n";
  std::cout << std::fixed << std::setprecision(6) << "fidelity: " << r.fidelity << "\n";
  for (const auto& [k, v] : r.breakdown) std::cout << "  " << k << ": " << v << "\n";
}
