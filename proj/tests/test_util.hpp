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

#include <fstream>
#include <sstream>
#include <string>

#include "steane/circuit.hpp"

namespace steane::testing {

inline std::string data_path(const std::string& rel) { return std::string(STEANE_SE_DATA_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const Circuit& shipped_primary() {
    static const Circuit c = load_circuit(data_path("circuits/primary_z.circ"));
    return c;
}

inline const Circuit& shipped_recovery() {
    static const Circuit c = load_circuit(data_path("circuits/recovery_z.circ"));
    return c;
}

/// Z-basis register of the 12-CNOT circuit that flips each entry of H once.
inline std::vector<Instruction> naive_h_instructions() {
    QubitRegister reg{7, 3, 0};
    std::vector<Instruction> out;
    for (std::uint32_t a = 0; a < 3; a++) {
        out.push_back(Instruction::reset(Basis::Z, reg.ancilla(a)));
    }
    const char* rows[] = {"1111000", "0110110", "0011011"};
    for (std::uint32_t a = 0; a < 3; a++) {
        for (std::uint32_t j = 0; j < 7; j++) {
            if (rows[a][j] == '1') {
                out.push_back(Instruction::cnot(reg.data(j), reg.ancilla(a)));
            }
        }
    }
    for (std::uint32_t a = 0; a < 3; a++) {
        out.push_back(Instruction::measure(Basis::Z, reg.ancilla(a), {OutputSlot::Kind::Syndrome, a}));
    }
    return out;
}

inline Circuit naive_h_circuit() {
    return schedule(QubitRegister{7, 3, 0}, Basis::Z, naive_h_instructions(),
                    solve_to_standard(steane_parity_checks()));
}

}  // namespace steane::testing
