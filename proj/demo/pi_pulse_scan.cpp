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

// Best selective pi pulse for every target subset of the C-H-F system.

#include <iomanip>
#include <iostream>

#include "zfqc/zfqc.hpp"

int main() {
  using namespace zfqc;
  const SpinSystem sys = systems::chf();
  const double b = 9e-4;
  std::cout << std::setprecision(6);
  for (std::uint32_t mask = 1; mask < 7; ++mask) {
    const SpinSet s = SpinSet::from_mask(mask);
    const DesignSolution d = find_pi_duration(sys, s, b, 0.0, 5e-3);
    std::string names;
    for (int i : s.indices()) names += sys.name(i);
    std::cout << std::setw(4) << names << "  t=" << std::scientific << d.duration
              << " s  F=" << std::fixed << d.predicted_fidelity << "\n";
  }
}
