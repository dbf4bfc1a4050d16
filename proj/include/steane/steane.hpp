// Copyright 2026 The steane-se Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "steane/circuit.hpp"
#include "steane/code_tables.hpp"
#include "steane/decoder.hpp"
#include "steane/fault_enum.hpp"
#include "steane/fault_tolerance.hpp"
#include "steane/montecarlo.hpp"
#include "steane/noise_sim.hpp"
#include "steane/pauli.hpp"
#include "steane/protocol.hpp"
#include "steane/search.hpp"
