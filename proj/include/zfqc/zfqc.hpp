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

// Core library. The file formats and the command-line front end live in
// zfqc/io.hpp and zfqc/cli.hpp and additionally need yaml-cpp.

#include "zfqc/compiler.hpp"
#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/pulse_design.hpp"
#include "zfqc/sequence.hpp"
#include "zfqc/simulator.hpp"
#include "zfqc/spin_system.hpp"
