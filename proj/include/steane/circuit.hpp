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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steane/code_tables.hpp"
#include "steane/pauli.hpp"

namespace steane {

/// Which stabilizer type a circuit measures: Z-type checks (detects X errors)
/// or X-type checks (detects Z errors).
enum class Basis : std::uint8_t { Z, X };

inline Basis dual(Basis b) {
    return b == Basis::Z ? Basis::X : Basis::Z;
}

inline char basis_char(Basis b) {
    return b == Basis::Z ? 'Z' : 'X';
}

inline Basis parse_basis(std::string_view s) {
    if (s == "Z" || s == "z") {
        return Basis::Z;
    }
    if (s == "X" || s == "x") {
        return Basis::X;
    }
    throw std::invalid_argument("basis must be Z or X, got '" + std::string(s) + "'");
}

enum class OpKind : std::uint8_t { ResetZ, ResetX, CNOT, MeasureZ, MeasureX };

struct OutputSlot {
    enum class Kind : std::uint8_t { Syndrome, Flag };
    Kind kind = Kind::Syndrome;
    std::uint32_t index = 0;

    std::string str() const { return (kind == Kind::Syndrome ? "b" : "flag") + std::to_string(index); }
    bool operator==(const OutputSlot&) const = default;
};

struct Instruction {
    OpKind kind = OpKind::CNOT;
    std::uint32_t q0 = 0;  ///< qubit, or CNOT control
    std::uint32_t q1 = 0;  ///< CNOT target
    OutputSlot slot;       ///< measurements only

    static Instruction reset(Basis b, std::uint32_t q) {
        return {b == Basis::Z ? OpKind::ResetZ : OpKind::ResetX, q, 0, {}};
    }
    static Instruction cnot(std::uint32_t control, std::uint32_t target) { return {OpKind::CNOT, control, target, {}}; }
    static Instruction measure(Basis b, std::uint32_t q, OutputSlot slot) {
        return {b == Basis::Z ? OpKind::MeasureZ : OpKind::MeasureX, q, 0, slot};
    }

    bool is_reset() const { return kind == OpKind::ResetZ || kind == OpKind::ResetX; }
    bool is_measure() const { return kind == OpKind::MeasureZ || kind == OpKind::MeasureX; }
    bool is_cnot() const { return kind == OpKind::CNOT; }
    Basis op_basis() const {
        return (kind == OpKind::ResetX || kind == OpKind::MeasureX) ? Basis::X : Basis::Z;
    }
    Bits qubit_mask() const { return (Bits{1} << q0) | (is_cnot() ? (Bits{1} << q1) : 0); }

    bool operator==(const Instruction&) const = default;
};

/// A layered CNOT-only syndrome-extraction circuit.
struct Circuit {
    QubitRegister reg;
    Basis basis = Basis::Z;
    std::vector<std::vector<Instruction>> layers;
    SyndromeMapSpec syndrome_map;

    std::size_t depth() const { return layers.size(); }

    std::vector<Instruction> instructions() const {
        std::vector<Instruction> out;
        for (const auto& layer : layers) {
            out.insert(out.end(), layer.begin(), layer.end());
        }
        return out;
    }

    std::size_t cnot_count() const {
        std::size_t n = 0;
        for (const auto& layer : layers) {
            for (const auto& ins : layer) {
                n += ins.is_cnot();
            }
        }
        return n;
    }

    bool operator==(const Circuit&) const = default;
};

class CircuitError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Greedy ASAP layering that keeps the per-qubit order of `instrs`.
inline Circuit schedule(
    const QubitRegister& reg, Basis basis, const std::vector<Instruction>& instrs, SyndromeMapSpec map = {}) {
    Circuit c;
    c.reg = reg;
    c.basis = basis;
    c.syndrome_map = std::move(map);
    std::vector<int> last(reg.size(), -1);
    for (const auto& ins : instrs) {
        if (ins.q0 >= reg.size() || (ins.is_cnot() && ins.q1 >= reg.size())) {
            throw CircuitError("instruction on qubit outside register of size " + std::to_string(reg.size()));
        }
        int layer = last[ins.q0] + 1;
        if (ins.is_cnot()) {
            layer = std::max(layer, last[ins.q1] + 1);
        }
        if (static_cast<std::size_t>(layer) >= c.layers.size()) {
            c.layers.resize(layer + 1);
        }
        c.layers[layer].push_back(ins);
        last[ins.q0] = layer;
        if (ins.is_cnot()) {
            last[ins.q1] = layer;
        }
    }
    return c;
}

/// Per layer, the qubits that hold state but are not acted on: data always,
/// ancillae and flags strictly between their reset and measurement.
inline std::vector<Bits> idle_masks(const Circuit& c) {
    std::vector<Bits> out(c.layers.size(), 0);
    Bits live = c.reg.data_mask();
    for (std::size_t li = 0; li < c.layers.size(); li++) {
        Bits touched = 0;
        Bits opened = 0;
        Bits closed = 0;
        for (const auto& ins : c.layers[li]) {
            touched |= ins.qubit_mask();
            if (ins.is_reset()) {
                opened |= Bits{1} << ins.q0;
            } else if (ins.is_measure()) {
                closed |= Bits{1} << ins.q0;
            }
        }
        out[li] = live & ~touched;
        live = (live | opened) & ~closed;
    }
    return out;
}

/// Checks everything that does not need simulation: register bounds, layer
/// disjointness, CNOT orientation, reset-before-use, single measurement per
/// ancilla and one write per output slot.
inline void validate_structure(const Circuit& c) {
    const QubitRegister& reg = c.reg;
    enum class Life : std::uint8_t { Fresh, Live, Measured };
    std::vector<Life> life(reg.size(), Life::Fresh);
    for (std::uint32_t q = 0; q < reg.n_data; q++) {
        life[q] = Life::Live;
    }
    std::vector<int> syndrome_writes(reg.n_ancilla, 0);
    std::vector<int> flag_writes(reg.n_flag, 0);

    auto use = [&](std::uint32_t q, std::size_t layer) {
        if (life[q] != Life::Live) {
            throw CircuitError(
                "layer " + std::to_string(layer) + ": " + reg.name(q) +
                (life[q] == Life::Fresh ? " used before reset" : " used after measurement"));
        }
    };

    for (std::size_t li = 0; li < c.layers.size(); li++) {
        Bits touched = 0;
        for (const auto& ins : c.layers[li]) {
            if (ins.q0 >= reg.size() || (ins.is_cnot() && ins.q1 >= reg.size())) {
                throw CircuitError("layer " + std::to_string(li) + ": qubit outside register");
            }
            if (ins.is_cnot() && ins.q0 == ins.q1) {
                throw CircuitError("layer " + std::to_string(li) + ": CNOT control equals target");
            }
            if (touched & ins.qubit_mask()) {
                throw CircuitError("layer " + std::to_string(li) + ": instructions overlap on a qubit");
            }
            touched |= ins.qubit_mask();

            if (ins.is_reset()) {
                if (reg.role(ins.q0) == QubitRole::Data) {
                    throw CircuitError("layer " + std::to_string(li) + ": data qubit " + reg.name(ins.q0) + " is reset");
                }
                if (life[ins.q0] != Life::Fresh) {
                    throw CircuitError("layer " + std::to_string(li) + ": " + reg.name(ins.q0) + " reset twice");
                }
                if (reg.role(ins.q0) == QubitRole::Ancilla && ins.op_basis() != c.basis) {
                    throw CircuitError("layer " + std::to_string(li) + ": ancilla reset in the wrong basis");
                }
                life[ins.q0] = Life::Live;
            } else if (ins.is_measure()) {
                QubitRole role = reg.role(ins.q0);
                if (role == QubitRole::Data) {
                    throw CircuitError(
                        "layer " + std::to_string(li) + ": data qubit " + reg.name(ins.q0) + " is measured");
                }
                use(ins.q0, li);
                if (role == QubitRole::Ancilla) {
                    if (ins.op_basis() != c.basis) {
                        throw CircuitError("layer " + std::to_string(li) + ": ancilla measured in the wrong basis");
                    }
                    if (ins.slot.kind != OutputSlot::Kind::Syndrome || ins.slot.index >= reg.n_ancilla) {
                        throw CircuitError("layer " + std::to_string(li) + ": ancilla must write a syndrome slot");
                    }
                    syndrome_writes[ins.slot.index]++;
                } else {
                    if (ins.slot.kind != OutputSlot::Kind::Flag || ins.slot.index >= reg.n_flag) {
                        throw CircuitError("layer " + std::to_string(li) + ": flag must write a flag slot");
                    }
                    flag_writes[ins.slot.index]++;
                }
                life[ins.q0] = Life::Measured;
            } else {
                use(ins.q0, li);
                use(ins.q1, li);
                QubitRole rc = reg.role(ins.q0);
                QubitRole rt = reg.role(ins.q1);
                // In the Z basis data only ever controls; the X basis is the mirror image.
                QubitRole from = c.basis == Basis::Z ? rc : rt;
                QubitRole to = c.basis == Basis::Z ? rt : rc;
                bool ok = (from == QubitRole::Data && to == QubitRole::Ancilla) ||
                          (from == QubitRole::Ancilla && to == QubitRole::Ancilla) ||
                          (from == QubitRole::Ancilla && to == QubitRole::Flag) ||
                          (from == QubitRole::Flag && to == QubitRole::Ancilla);
                if (!ok) {
                    throw CircuitError(
                        "layer " + std::to_string(li) + ": CNOT " + reg.name(ins.q0) + "->" + reg.name(ins.q1) +
                        " is not an allowed coupling");
                }
            }
        }
    }
    for (std::uint32_t q = reg.n_data; q < reg.size(); q++) {
        if (life[q] != Life::Measured) {
            throw CircuitError(reg.name(q) + (life[q] == Life::Fresh ? " is never reset" : " is never measured"));
        }
    }
    for (std::uint32_t i = 0; i < reg.n_ancilla; i++) {
        if (syndrome_writes[i] != 1) {
            throw CircuitError("output slot b" + std::to_string(i) + " written " + std::to_string(syndrome_writes[i]) +
                               " times");
        }
    }
    for (std::uint32_t i = 0; i < reg.n_flag; i++) {
        if (flag_writes[i] != 1) {
            throw CircuitError("output slot flag" + std::to_string(i) + " written " + std::to_string(flag_writes[i]) +
                               " times");
        }
    }
}

/// A measurement's observable pulled back to the start of the circuit.
struct MeasurementObservable {
    OutputSlot slot;
    PauliOperator data_part;  ///< on the data qubits at circuit start
    bool deterministic = true;  ///< every non-data component is fixed by its reset
};

/// Heisenberg back-propagation of every measurement (in slot order:
/// syndrome slots, then flag slots). Requires a structurally valid circuit.
inline std::vector<MeasurementObservable> measurement_observables(const Circuit& c) {
    const QubitRegister& reg = c.reg;
    std::vector<MeasurementObservable> out;
    std::vector<Instruction> flat = c.instructions();
    for (std::size_t i = 0; i < flat.size(); i++) {
        if (!flat[i].is_measure()) {
            continue;
        }
        Bits x = 0;
        Bits z = 0;
        Bits b = Bits{1} << flat[i].q0;
        (flat[i].op_basis() == Basis::Z ? z : x) = b;
        bool det = true;
        for (std::size_t k = i; k-- > 0;) {
            const Instruction& ins = flat[k];
            if (ins.is_cnot()) {
                Bits cb = Bits{1} << ins.q0;
                Bits tb = Bits{1} << ins.q1;
                if (x & cb) {
                    x ^= tb;
                }
                if (z & tb) {
                    z ^= cb;
                }
            } else if (ins.is_reset()) {
                Bits qb = Bits{1} << ins.q0;
                bool ok = ins.op_basis() == Basis::Z ? !(x & qb) : !(z & qb);
                det = det && ok;
                x &= ~qb;
                z &= ~qb;
            }
        }
        MeasurementObservable m;
        m.slot = flat[i].slot;
        m.data_part = PauliOperator(reg.size(), x & reg.data_mask(), z & reg.data_mask());
        m.deterministic = det && !((x | z) & ~reg.data_mask());
        out.push_back(m);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.slot.kind != b.slot.kind) {
            return a.slot.kind < b.slot.kind;
        }
        return a.slot.index < b.slot.index;
    });
    return out;
}

/// Data parity measured by each syndrome slot, one row per slot.
inline CheckMatrix measured_matrix(const Circuit& c) {
    CheckMatrix m(c.reg.n_ancilla, c.reg.n_data);
    for (const auto& obs : measurement_observables(c)) {
        if (obs.slot.kind != OutputSlot::Kind::Syndrome) {
            continue;
        }
        Bits row = c.basis == Basis::Z ? obs.data_part.z() : obs.data_part.x();
        for (std::uint32_t j = 0; j < c.reg.n_data; j++) {
            m.set(obs.slot.index, j, (row >> j) & 1);
        }
    }
    return m;
}

/// Full validation: structure, then noiseless correctness. Every syndrome bit
/// must measure a check of the measured type deterministically, the syndrome
/// map must turn those into H, and every flag must read a fixed value that
/// does not depend on the data.
inline void validate(const Circuit& c) {
    validate_structure(c);
    for (const auto& obs : measurement_observables(c)) {
        if (!obs.deterministic) {
            throw CircuitError("measurement " + obs.slot.str() + " is not deterministic");
        }
        if (obs.slot.kind == OutputSlot::Kind::Flag) {
            if (!obs.data_part.is_identity()) {
                throw CircuitError("flag " + obs.slot.str() + " reads data parity " + obs.data_part.str());
            }
            continue;
        }
        Bits wrong = c.basis == Basis::Z ? obs.data_part.x() : obs.data_part.z();
        if (wrong) {
            throw CircuitError("syndrome " + obs.slot.str() + " measures the wrong Pauli type");
        }
    }
    CheckMatrix m = measured_matrix(c);
    if (m != c.syndrome_map.measured_matrix) {
        throw CircuitError("circuit measures\n" + m.str() + "but its syndrome map records\n" +
                           c.syndrome_map.measured_matrix.str());
    }
    if (c.syndrome_map.to_standard * m != steane_parity_checks()) {
        throw CircuitError("syndrome map does not recover the standard syndrome");
    }
}

/// Measured matrix and transform read off the circuit itself.
inline SyndromeMapSpec derive_syndrome_map(const Circuit& c) {
    validate_structure(c);
    return solve_to_standard(measured_matrix(c));
}

/// Swaps the basis: resets and measurements change basis, CNOTs reverse.
inline Circuit dualize(const Circuit& c) {
    Circuit out = c;
    out.basis = dual(c.basis);
    for (auto& layer : out.layers) {
        for (auto& ins : layer) {
            switch (ins.kind) {
                case OpKind::ResetZ:
                    ins.kind = OpKind::ResetX;
                    break;
                case OpKind::ResetX:
                    ins.kind = OpKind::ResetZ;
                    break;
                case OpKind::MeasureZ:
                    ins.kind = OpKind::MeasureX;
                    break;
                case OpKind::MeasureX:
                    ins.kind = OpKind::MeasureZ;
                    break;
                case OpKind::CNOT:
                    std::swap(ins.q0, ins.q1);
                    break;
            }
        }
    }
    return out;
}

inline std::string serialize(const Circuit& c) {
    std::ostringstream out;
    out << "register data=" << c.reg.n_data << " ancilla=" << c.reg.n_ancilla << " flag=" << c.reg.n_flag
        << " basis=" << basis_char(c.basis) << "\n";
    for (std::size_t li = 0; li < c.layers.size(); li++) {
        if (li > 0) {
            out << "---\n";
        }
        for (const auto& ins : c.layers[li]) {
            switch (ins.kind) {
                case OpKind::ResetZ:
                    out << "RZ " << c.reg.name(ins.q0) << "\n";
                    break;
                case OpKind::ResetX:
                    out << "RX " << c.reg.name(ins.q0) << "\n";
                    break;
                case OpKind::CNOT:
                    out << "CX " << c.reg.name(ins.q0) << " " << c.reg.name(ins.q1) << "\n";
                    break;
                case OpKind::MeasureZ:
                case OpKind::MeasureX:
                    out << (ins.kind == OpKind::MeasureZ ? "MZ " : "MX ") << c.reg.name(ins.q0) << " -> "
                        << ins.slot.str() << "\n";
                    break;
            }
        }
    }
    out << "map\n" << c.syndrome_map.to_standard.str();
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

inline std::uint32_t parse_uint(const std::string& s, std::size_t line_no) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw CircuitError("line " + std::to_string(line_no) + ": expected a number, got '" + s + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(s));
}

inline std::uint32_t parse_qubit(const QubitRegister& reg, const std::string& s, std::size_t line_no) {
    if (s.size() < 2) {
        throw CircuitError("line " + std::to_string(line_no) + ": bad qubit '" + s + "'");
    }
    std::uint32_t idx = parse_uint(s.substr(1), line_no);
    switch (s[0]) {
        case 'd':
            if (idx < 1 || idx > reg.n_data) {
                break;
            }
            return reg.data(idx - 1);
        case 'a':
            if (idx >= reg.n_ancilla) {
                break;
            }
            return reg.ancilla(idx);
        case 'f':
            if (idx >= reg.n_flag) {
                break;
            }
            return reg.flag(idx);
        default:
            break;
    }
    throw CircuitError("line " + std::to_string(line_no) + ": unknown qubit '" + s + "'");
}

inline OutputSlot parse_slot(const std::string& s, std::size_t line_no) {
    if (s.rfind("flag", 0) == 0) {
        return {OutputSlot::Kind::Flag, parse_uint(s.substr(4), line_no)};
    }
    if (s.rfind("b", 0) == 0) {
        return {OutputSlot::Kind::Syndrome, parse_uint(s.substr(1), line_no)};
    }
    throw CircuitError("line " + std::to_string(line_no) + ": unknown output slot '" + s + "'");
}

}  // namespace detail

/// Parses the line-oriented circuit format. Without `---` separators the
/// instructions are ASAP-scheduled; with them the given layering is kept.
/// A missing `map` section is derived from the circuit. The result is validated.
inline Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<QubitRegister> reg;
    Basis basis = Basis::Z;
    std::vector<std::vector<Instruction>> layers(1);
    bool explicit_layers = false;
    bool in_map = false;
    std::string map_text;
    std::size_t map_line = 0;

    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        auto tok = detail::split_ws(line);
        if (tok.empty()) {
            continue;
        }
        if (in_map) {
            if (tok.size() != 1) {
                throw CircuitError("line " + std::to_string(line_no) + ": map rows are single bit strings");
            }
            map_text += tok[0] + "\n";
            continue;
        }
        if (!reg) {
            if (tok[0] != "register") {
                throw CircuitError("line " + std::to_string(line_no) + ": expected 'register' header");
            }
            QubitRegister r;
            r.n_data = 0;
            bool have_basis = false;
            for (std::size_t i = 1; i < tok.size(); i++) {
                auto eq = tok[i].find('=');
                if (eq == std::string::npos) {
                    throw CircuitError("line " + std::to_string(line_no) + ": expected key=value, got '" + tok[i] + "'");
                }
                std::string key = tok[i].substr(0, eq);
                std::string val = tok[i].substr(eq + 1);
                if (key == "data") {
                    r.n_data = detail::parse_uint(val, line_no);
                } else if (key == "ancilla") {
                    r.n_ancilla = detail::parse_uint(val, line_no);
                } else if (key == "flag") {
                    r.n_flag = detail::parse_uint(val, line_no);
                } else if (key == "basis") {
                    try {
                        basis = parse_basis(val);
                    } catch (const std::invalid_argument& e) {
                        throw CircuitError("line " + std::to_string(line_no) + ": " + e.what());
                    }
                    have_basis = true;
                } else {
                    throw CircuitError("line " + std::to_string(line_no) + ": unknown header key '" + key + "'");
                }
            }
            if (r.n_data != 7) {
                throw CircuitError("line " + std::to_string(line_no) + ": only data=7 is supported");
            }
            if (!have_basis) {
                throw CircuitError("line " + std::to_string(line_no) + ": header is missing basis=");
            }
            if (r.size() > 32) {
                throw CircuitError("line " + std::to_string(line_no) + ": register larger than 32 qubits");
            }
            reg = r;
            continue;
        }
        const std::string& op = tok[0];
        if (op == "---") {
            explicit_layers = true;
            layers.emplace_back();
        } else if (op == "map") {
            in_map = true;
            map_line = line_no;
        } else if (op == "RZ" || op == "RX") {
            if (tok.size() != 2) {
                throw CircuitError("line " + std::to_string(line_no) + ": " + op + " takes one qubit");
            }
            layers.back().push_back(
                Instruction::reset(op == "RZ" ? Basis::Z : Basis::X, detail::parse_qubit(*reg, tok[1], line_no)));
        } else if (op == "CX") {
            if (tok.size() != 3) {
                throw CircuitError("line " + std::to_string(line_no) + ": CX takes control and target");
            }
            layers.back().push_back(Instruction::cnot(
                detail::parse_qubit(*reg, tok[1], line_no), detail::parse_qubit(*reg, tok[2], line_no)));
        } else if (op == "MZ" || op == "MX") {
            if (tok.size() != 4 || tok[2] != "->") {
                throw CircuitError("line " + std::to_string(line_no) + ": expected '" + op + " <qubit> -> <slot>'");
            }
            layers.back().push_back(Instruction::measure(
                op == "MZ" ? Basis::Z : Basis::X, detail::parse_qubit(*reg, tok[1], line_no),
                detail::parse_slot(tok[3], line_no)));
        } else {
            throw CircuitError("line " + std::to_string(line_no) + ": unknown instruction '" + op + "'");
        }
    }
    if (!reg) {
        throw CircuitError("empty circuit file");
    }

    Circuit c;
    if (explicit_layers) {
        c.reg = *reg;
        c.basis = basis;
        c.layers = std::move(layers);
        if (std::any_of(c.layers.begin(), c.layers.end(), [](const auto& l) { return l.empty(); })) {
            throw CircuitError("empty layer between '---' separators");
        }
    } else {
        c = schedule(*reg, basis, layers.front());
    }
    if (map_text.empty()) {
        c.syndrome_map = derive_syndrome_map(c);
    } else {
        validate_structure(c);
        CheckMatrix t;
        try {
            t = CheckMatrix::parse(map_text);
        } catch (const std::invalid_argument& e) {
            throw CircuitError("map at line " + std::to_string(map_line) + ": " + e.what());
        }
        c.syndrome_map = SyndromeMapSpec{measured_matrix(c), t};
    }
    validate(c);
    return c;
}

inline Circuit load_circuit(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw CircuitError("cannot open circuit file " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return parse_circuit(ss.str());
    } catch (const CircuitError& e) {
        throw CircuitError(path + ": " + e.what());
    }
}

}  // namespace steane
