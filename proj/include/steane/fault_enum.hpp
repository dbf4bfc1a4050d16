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

#include <cstdint>
#include <string>
#include <vector>

#include "steane/circuit.hpp"
#include "steane/pauli.hpp"

namespace steane {

enum class SiteKind : std::uint8_t {
    AfterGate,      ///< any of the 15 nontrivial Paulis on a CNOT's two qubits
    AfterReset,     ///< X, Y or Z right after a reset
    BeforeMeasure,  ///< X, Y or Z right before a measurement
    MeasureFlip,    ///< classical flip of the recorded outcome
    Idle,           ///< Z on a live qubit that no instruction touches in the layer
};

inline const char* to_string(SiteKind k) {
    switch (k) {
        case SiteKind::AfterGate:
            return "after-gate";
        case SiteKind::AfterReset:
            return "after-reset";
        case SiteKind::BeforeMeasure:
            return "before-measure";
        case SiteKind::MeasureFlip:
            return "measure-flip";
        case SiteKind::Idle:
            return "idle";
    }
    return "?";
}

/// A space-time position plus the Pauli injected there.
struct FaultLocation {
    std::size_t layer = 0;
    std::size_t instr = 0;  ///< index within the layer; unused for Idle
    SiteKind kind = SiteKind::AfterGate;
    std::uint32_t qubit = 0;  ///< Idle only
    PauliOperator pauli;      ///< over the full register; identity for MeasureFlip

    std::string str(const QubitRegister& reg) const {
        std::string out = "L" + std::to_string(layer) + " " + to_string(kind);
        if (kind == SiteKind::Idle) {
            out += " " + reg.name(qubit);
        } else {
            out += " #" + std::to_string(instr);
        }
        if (kind != SiteKind::MeasureFlip) {
            out += " ";
            bool first = true;
            for (std::uint32_t q = 0; q < reg.size(); q++) {
                char p = pauli.at(q);
                if (p == 'I') {
                    continue;
                }
                out += (first ? "" : ".") + std::string(1, p) + "(" + reg.name(q) + ")";
                first = false;
            }
        }
        return out;
    }

    bool operator==(const FaultLocation&) const = default;
};

struct FaultEffect {
    FaultLocation location;
    PauliOperator residual_data;  ///< 7-qubit Pauli left on the data
    Bits bit_flips = 0;           ///< bit k = syndrome slot b_k flipped
    Bits flag_flips = 0;          ///< bit k = flag slot k flipped
    Reduction reduction;          ///< of residual_data

    bool flag_flip() const { return flag_flips != 0; }
};

/// Every single-fault location of the circuit. Count:
/// 15 per CNOT + 3 per reset + 4 per measurement + 1 per idle slot.
inline std::vector<FaultLocation> enumerate_faults(const Circuit& c) {
    const std::uint32_t n = c.reg.size();
    static constexpr char kPaulis[] = {'I', 'X', 'Y', 'Z'};
    std::vector<FaultLocation> out;
    std::vector<Bits> idle = idle_masks(c);
    for (std::size_t li = 0; li < c.layers.size(); li++) {
        const auto& layer = c.layers[li];
        for (std::size_t k = 0; k < layer.size(); k++) {
            const Instruction& ins = layer[k];
            if (ins.is_cnot()) {
                for (int pc = 0; pc < 4; pc++) {
                    for (int pt = 0; pt < 4; pt++) {
                        if (pc == 0 && pt == 0) {
                            continue;
                        }
                        PauliOperator p = PauliOperator::single(n, ins.q0, kPaulis[pc]) *
                                          PauliOperator::single(n, ins.q1, kPaulis[pt]);
                        out.push_back({li, k, SiteKind::AfterGate, 0, p});
                    }
                }
            } else {
                SiteKind kind = ins.is_reset() ? SiteKind::AfterReset : SiteKind::BeforeMeasure;
                for (int p = 1; p < 4; p++) {
                    out.push_back({li, k, kind, 0, PauliOperator::single(n, ins.q0, kPaulis[p])});
                }
                if (ins.is_measure()) {
                    out.push_back({li, k, SiteKind::MeasureFlip, 0, PauliOperator(n)});
                }
            }
        }
        for (std::uint32_t q = 0; q < n; q++) {
            if ((idle[li] >> q) & 1) {
                out.push_back({li, 0, SiteKind::Idle, q, PauliOperator::single(n, q, 'Z')});
            }
        }
    }
    return out;
}

namespace detail {

struct PropagationState {
    Bits x = 0;
    Bits z = 0;
    Bits bits = 0;
    Bits flags = 0;
};

inline void apply_instruction(const Instruction& ins, PropagationState& s) {
    Bits q = Bits{1} << ins.q0;
    switch (ins.kind) {
        case OpKind::CNOT: {
            Bits t = Bits{1} << ins.q1;
            if (s.x & q) {
                s.x ^= t;
            }
            if (s.z & t) {
                s.z ^= q;
            }
            break;
        }
        case OpKind::ResetZ:
        case OpKind::ResetX:
            s.x &= ~q;
            s.z &= ~q;
            break;
        case OpKind::MeasureZ:
        case OpKind::MeasureX: {
            bool flipped = ins.kind == OpKind::MeasureZ ? (s.x & q) != 0 : (s.z & q) != 0;
            if (flipped) {
                (ins.slot.kind == OutputSlot::Kind::Syndrome ? s.bits : s.flags) ^= Bits{1} << ins.slot.index;
            }
            break;
        }
    }
}

inline FaultEffect finish(const Circuit& c, const FaultLocation& f, const PropagationState& s) {
    FaultEffect e;
    e.location = f;
    Bits dm = c.reg.data_mask();
    e.residual_data = PauliOperator(c.reg.n_data, s.x & dm, s.z & dm);
    e.bit_flips = s.bits;
    e.flag_flips = s.flags;
    e.reduction = reduce_mod_stabilizers(e.residual_data);
    return e;
}

}  // namespace detail

/// Pushes the fault through the rest of the circuit, instruction by instruction.
inline FaultEffect propagate(const Circuit& c, const FaultLocation& f) {
    if (f.layer >= c.layers.size() ||
        (f.kind != SiteKind::Idle && f.instr >= c.layers[f.layer].size())) {
        throw std::out_of_range("fault location outside the circuit");
    }
    detail::PropagationState s;
    s.x = f.pauli.x();
    s.z = f.pauli.z();
    if (f.kind == SiteKind::BeforeMeasure) {
        detail::apply_instruction(c.layers[f.layer][f.instr], s);
    } else if (f.kind == SiteKind::MeasureFlip) {
        const Instruction& m = c.layers[f.layer][f.instr];
        (m.slot.kind == OutputSlot::Kind::Syndrome ? s.bits : s.flags) ^= Bits{1} << m.slot.index;
    }
    for (std::size_t li = f.layer + 1; li < c.layers.size(); li++) {
        for (const auto& ins : c.layers[li]) {
            detail::apply_instruction(ins, s);
        }
    }
    return detail::finish(c, f, s);
}

/// Noiseless run with a Pauli on the data before the circuit starts.
inline FaultEffect propagate_input(const Circuit& c, const PauliOperator& data_error) {
    Bits dm = c.reg.data_mask();
    if ((data_error.x() | data_error.z()) & ~dm) {
        throw std::invalid_argument("input error must be supported on data qubits");
    }
    detail::PropagationState s;
    s.x = data_error.x();
    s.z = data_error.z();
    for (const auto& layer : c.layers) {
        for (const auto& ins : layer) {
            detail::apply_instruction(ins, s);
        }
    }
    FaultLocation none;
    none.pauli = PauliOperator(c.reg.size());
    return detail::finish(c, none, s);
}

inline std::vector<FaultEffect> propagate_all(const Circuit& c) {
    std::vector<FaultEffect> out;
    for (const auto& f : enumerate_faults(c)) {
        out.push_back(propagate(c, f));
    }
    return out;
}

/// Single faults whose data residual cannot be fixed by a weight-one lookup:
/// the X or Z part has stabilizer-reduced weight of at least two.
inline std::vector<FaultEffect> dangerous_faults(const Circuit& c) {
    std::vector<FaultEffect> out;
    for (const auto& f : enumerate_faults(c)) {
        FaultEffect e = propagate(c, f);
        if (e.reduction.css_weight() >= 2) {
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace steane
