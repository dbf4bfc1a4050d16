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

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "steane/circuit.hpp"
#include "steane/fault_enum.hpp"
#include "steane/pauli.hpp"

namespace steane {

/// s = to_standard * b.
inline Bits raw_to_syndrome(const SyndromeMapSpec& map, Bits raw) {
    return map.to_standard.apply(raw);
}

/// Lookup tables for one primary basis. Syndromes are 3-bit words, bit r =
/// check r. `standard` decodes the primary circuit's bits; `remap` decodes the
/// recovery circuit's bits after a flag, so its corrections have the other
/// Pauli type.
struct DecoderTables {
    Basis primary_basis = Basis::Z;
    SyndromeMapSpec primary_map;
    SyndromeMapSpec recovery_map;
    std::array<PauliOperator, 8> standard;
    std::array<PauliOperator, 8> remap;

    bool operator==(const DecoderTables&) const = default;
};

/// Correction type for errors detected by a circuit measuring `basis` checks.
inline char correction_type(Basis measured) {
    return measured == Basis::Z ? 'X' : 'Z';
}

inline PauliOperator pattern_to_pauli(Bits pattern, char type) {
    return type == 'X' ? PauliOperator(7, pattern, 0) : PauliOperator(7, 0, pattern);
}

/// Single-qubit lookup table for errors detected by `measured` checks.
inline std::array<PauliOperator, 8> standard_table(Basis measured) {
    std::array<PauliOperator, 8> t;
    for (Bits s = 0; s < 8; s++) {
        t[s] = pattern_to_pauli(steane_code().lookup(s), correction_type(measured));
    }
    return t;
}

inline PauliOperator decode_standard(const DecoderTables& t, Bits syndrome) {
    return t.standard.at(syndrome & 7);
}

inline PauliOperator decode_remap(const DecoderTables& t, Bits syndrome) {
    return t.remap.at(syndrome & 7);
}

/// Tables with no remapping at all (remap == standard lookup).
inline DecoderTables standard_tables(const Circuit& primary, const Circuit& recovery) {
    DecoderTables t;
    t.primary_basis = primary.basis;
    t.primary_map = primary.syndrome_map;
    t.recovery_map = recovery.syndrome_map;
    t.standard = standard_table(primary.basis);
    t.remap = standard_table(recovery.basis);
    return t;
}

class RemapAmbiguityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Minimum-weight member of pattern + span(checks); ties go to the
/// lexicographically smallest support.
inline Bits coset_rep(Bits pattern) {
    const CheckMatrix& h = steane_parity_checks();
    Bits best = pattern;
    for (Bits m = 0; m < 8; m++) {
        Bits s = 0;
        for (std::size_t r = 0; r < 3; r++) {
            if ((m >> r) & 1) {
                s ^= h.row(r);
            }
        }
        Bits cand = pattern ^ s;
        int wc = std::popcount(cand);
        int wb = std::popcount(best);
        if (wc < wb || (wc == wb && support_less(cand, best))) {
            best = cand;
        }
    }
    return best;
}

}  // namespace detail

/// Raw bits of a noiseless run of `c` with `data_error` on the data.
inline Bits noiseless_bits(const Circuit& c, const PauliOperator& data_error) {
    PauliOperator padded(c.reg.size(), data_error.x(), data_error.z());
    return propagate_input(c, padded).bit_flips;
}

/// Derives the post-flag tables from the circuits. Every single fault of the
/// primary circuit that raises a flag is pushed through a noiseless run of
/// the recovery circuit; its syndrome then maps to the smallest representative
/// of the residual's coset. Throws RemapAmbiguityError when two flagged
/// faults share a recovery syndrome but leave different cosets.
inline DecoderTables build_remap(const Circuit& primary, const Circuit& recovery) {
    if (recovery.basis != dual(primary.basis)) {
        throw std::invalid_argument("recovery circuit must run in the dual basis of the primary circuit");
    }
    DecoderTables t = standard_tables(primary, recovery);
    char type = correction_type(recovery.basis);

    // syndrome -> coset representatives seen, and whether any was dangerous.
    std::map<Bits, std::set<Bits>> seen;
    std::map<Bits, std::string> witness;
    for (const auto& f : enumerate_faults(primary)) {
        FaultEffect e = propagate(primary, f);
        if (!e.flag_flip()) {
            continue;
        }
        Bits part = type == 'X' ? e.residual_data.x() : e.residual_data.z();
        PauliOperator detected = pattern_to_pauli(part, type);
        Bits s = raw_to_syndrome(recovery.syndrome_map, noiseless_bits(recovery, detected));
        Bits rep = detail::coset_rep(part);
        auto& reps = seen[s];
        reps.insert(rep);
        if (reps.size() > 1) {
            throw RemapAmbiguityError(
                "recovery syndrome " + bits_to_string(s, 3) + " is produced by flagged faults leaving " +
                pattern_to_pauli(*reps.begin(), type).str() + " and " + pattern_to_pauli(*reps.rbegin(), type).str() +
                " (e.g. " + f.str(primary.reg) + ", after " + witness[s] + ")");
        }
        witness.emplace(s, f.str(primary.reg));
    }
    for (const auto& [s, reps] : seen) {
        Bits rep = *reps.begin();
        if (std::popcount(rep) >= 2) {
            t.remap[s] = pattern_to_pauli(rep, type);
        }
    }
    return t;
}

/// "000 -> I" lines for both tables.
inline std::string serialize(const DecoderTables& t) {
    std::ostringstream out;
    out << "decoder primary=" << basis_char(t.primary_basis) << " recovery=" << basis_char(dual(t.primary_basis))
        << "\n";
    out << "standard\n";
    for (Bits s = 0; s < 8; s++) {
        out << bits_to_string(s, 3) << " -> " << t.standard[s].str() << "\n";
    }
    out << "remap\n";
    for (Bits s = 0; s < 8; s++) {
        out << bits_to_string(s, 3) << " -> " << t.remap[s].str() << "\n";
    }
    return out.str();
}

/// Syndrome entries where the remap departs from the plain lookup.
inline std::map<Bits, PauliOperator> remapped_entries(const DecoderTables& t) {
    std::map<Bits, PauliOperator> out;
    auto plain = standard_table(dual(t.primary_basis));
    for (Bits s = 0; s < 8; s++) {
        if (t.remap[s] != plain[s]) {
            out.emplace(s, t.remap[s]);
        }
    }
    return out;
}

}  // namespace steane
