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
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steane/code_tables.hpp"

namespace steane {

enum class QubitRole : std::uint8_t { Data, Ancilla, Flag };

/// Contiguous qubit layout: data first, then syndrome ancillae, then flags.
struct QubitRegister {
    std::uint32_t n_data = 7;
    std::uint32_t n_ancilla = 0;
    std::uint32_t n_flag = 0;

    std::uint32_t size() const { return n_data + n_ancilla + n_flag; }
    std::uint32_t data(std::uint32_t i) const { return i; }
    std::uint32_t ancilla(std::uint32_t i) const { return n_data + i; }
    std::uint32_t flag(std::uint32_t i) const { return n_data + n_ancilla + i; }

    QubitRole role(std::uint32_t q) const {
        if (q < n_data) {
            return QubitRole::Data;
        }
        if (q < n_data + n_ancilla) {
            return QubitRole::Ancilla;
        }
        if (q < size()) {
            return QubitRole::Flag;
        }
        throw std::out_of_range("qubit " + std::to_string(q) + " outside register of size " + std::to_string(size()));
    }

    /// Index within the qubit's own role (a2 -> 2).
    std::uint32_t local_index(std::uint32_t q) const {
        switch (role(q)) {
            case QubitRole::Data:
                return q;
            case QubitRole::Ancilla:
                return q - n_data;
            case QubitRole::Flag:
                return q - n_data - n_ancilla;
        }
        return q;
    }

    Bits data_mask() const { return CheckMatrix::column_mask(n_data); }
    Bits all_mask() const { return CheckMatrix::column_mask(size()); }

    /// "d3" (1-based data), "a0", "f0" (0-based ancilla/flag).
    std::string name(std::uint32_t q) const {
        switch (role(q)) {
            case QubitRole::Data:
                return "d" + std::to_string(q + 1);
            case QubitRole::Ancilla:
                return "a" + std::to_string(local_index(q));
            case QubitRole::Flag:
                return "f" + std::to_string(local_index(q));
        }
        return "?";
    }

    bool operator==(const QubitRegister&) const = default;
};

/// Phaseless Pauli operator on up to 64 qubits.
class PauliOperator {
   public:
    PauliOperator() = default;
    explicit PauliOperator(std::uint32_t num_qubits, Bits x = 0, Bits z = 0) : n_(num_qubits), x_(x), z_(z) {
        if (num_qubits > 64) {
            throw std::invalid_argument("PauliOperator supports at most 64 qubits");
        }
        Bits m = CheckMatrix::column_mask(num_qubits);
        if ((x & ~m) || (z & ~m)) {
            throw std::invalid_argument("Pauli bits outside the register");
        }
    }

    static PauliOperator single(std::uint32_t num_qubits, std::uint32_t q, char p) {
        Bits b = Bits{1} << q;
        switch (p) {
            case 'I':
                return PauliOperator(num_qubits);
            case 'X':
                return PauliOperator(num_qubits, b, 0);
            case 'Y':
                return PauliOperator(num_qubits, b, b);
            case 'Z':
                return PauliOperator(num_qubits, 0, b);
            default:
                throw std::invalid_argument(std::string("unknown Pauli '") + p + "'");
        }
    }

    /// Parses "Z2.Z5", "X3.Z3", "Y1" or "I". Indices are 1-based.
    static PauliOperator parse(std::string_view text, std::uint32_t num_qubits = 7) {
        PauliOperator out(num_qubits);
        if (text == "I" || text.empty()) {
            return out;
        }
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t dot = text.find('.', pos);
            std::string_view tok = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
            if (tok.size() < 2) {
                throw std::invalid_argument("bad Pauli term '" + std::string(tok) + "' in '" + std::string(text) + "'");
            }
            std::uint32_t idx = 0;
            for (char c : tok.substr(1)) {
                if (c < '0' || c > '9') {
                    throw std::invalid_argument("bad qubit index in '" + std::string(tok) + "'");
                }
                idx = idx * 10 + static_cast<std::uint32_t>(c - '0');
            }
            if (idx < 1 || idx > num_qubits) {
                throw std::invalid_argument("qubit index out of range in '" + std::string(tok) + "'");
            }
            out = out * single(num_qubits, idx - 1, tok[0]);
            if (dot == std::string_view::npos) {
                break;
            }
            pos = dot + 1;
        }
        return out;
    }

    std::uint32_t num_qubits() const { return n_; }
    Bits x() const { return x_; }
    Bits z() const { return z_; }
    Bits support() const { return x_ | z_; }
    int weight() const { return std::popcount(x_ | z_); }
    bool is_identity() const { return (x_ | z_) == 0; }

    char at(std::uint32_t q) const {
        bool xb = (x_ >> q) & 1;
        bool zb = (z_ >> q) & 1;
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }

    PauliOperator x_part() const { return PauliOperator(n_, x_, 0); }
    PauliOperator z_part() const { return PauliOperator(n_, 0, z_); }
    PauliOperator restricted(Bits mask) const { return PauliOperator(n_, x_ & mask, z_ & mask); }

    /// Phaseless product; throws on register mismatch.
    PauliOperator operator*(const PauliOperator& rhs) const {
        check_same(rhs);
        return PauliOperator(n_, x_ ^ rhs.x_, z_ ^ rhs.z_);
    }
    PauliOperator& operator*=(const PauliOperator& rhs) { return *this = *this * rhs; }

    bool commutes(const PauliOperator& rhs) const {
        check_same(rhs);
        return !parity((x_ & rhs.z_) ^ (z_ & rhs.x_));
    }

    bool operator==(const PauliOperator&) const = default;

    /// "Z2.Z5" style, 1-based; "I" for identity.
    std::string str() const {
        if (is_identity()) {
            return "I";
        }
        std::string out;
        for (std::uint32_t q = 0; q < n_; q++) {
            char c = at(q);
            if (c == 'I') {
                continue;
            }
            if (!out.empty()) {
                out += '.';
            }
            out += c;
            out += std::to_string(q + 1);
        }
        return out;
    }

   private:
    void check_same(const PauliOperator& rhs) const {
        if (n_ != rhs.n_) {
            throw std::invalid_argument(
                "Pauli register mismatch: " + std::to_string(n_) + " vs " + std::to_string(rhs.n_) + " qubits");
        }
    }

    std::uint32_t n_ = 0;
    Bits x_ = 0;
    Bits z_ = 0;
};

inline PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
    return a * b;
}

inline bool commutes(const PauliOperator& a, const PauliOperator& b) {
    return a.commutes(b);
}

enum class ErrorClass : std::uint8_t { Identity, Stabilizer, LogicalX, LogicalZ, LogicalY };

inline const char* to_string(ErrorClass c) {
    switch (c) {
        case ErrorClass::Identity:
            return "identity";
        case ErrorClass::Stabilizer:
            return "stabilizer";
        case ErrorClass::LogicalX:
            return "logical-X";
        case ErrorClass::LogicalZ:
            return "logical-Z";
        case ErrorClass::LogicalY:
            return "logical-Y";
    }
    return "?";
}

inline bool is_logical(ErrorClass c) {
    return c == ErrorClass::LogicalX || c == ErrorClass::LogicalZ || c == ErrorClass::LogicalY;
}

struct Reduction {
    /// Identity only for the identity operator. Stabilizer means the error is
    /// harmless: it times its minimum-weight correction is a stabilizer.
    /// Logical* names the logical the error implements after that correction.
    ErrorClass cls = ErrorClass::Identity;
    /// Minimum-weight element of e * S (no logical factors applied).
    PauliOperator min_weight_rep;
    /// Minimum weights of the X and Z parts within their stabilizer cosets.
    int x_weight = 0;
    int z_weight = 0;

    bool logical() const { return is_logical(cls); }
    /// CSS reduced weight: each part's coset weight, the larger of the two.
    int css_weight() const { return std::max(x_weight, z_weight); }
};

namespace detail {

inline bool support_less(Bits a, Bits b) {
    // Lexicographic on sorted 1-based supports of equal size: the smaller
    // lowest differing index wins.
    if (a == b) {
        return false;
    }
    Bits diff = a ^ b;
    int low = std::countr_zero(diff);
    return (a >> low) & 1;
}

inline bool rep_less(const PauliOperator& a, const PauliOperator& b) {
    if (a.weight() != b.weight()) {
        return a.weight() < b.weight();
    }
    if (a.support() != b.support()) {
        return support_less(a.support(), b.support());
    }
    if (a.x() != b.x()) {
        return support_less(a.x(), b.x());
    }
    return support_less(a.z(), b.z());
}

}  // namespace detail

/// The [[7,1,3]] code: six generators (S1..S3 X-type, S4..S6 Z-type) and one
/// transversal pair of logical operators.
class StabilizerGroup {
   public:
    StabilizerGroup() {
        const CheckMatrix& h = steane_parity_checks();
        for (std::size_t r = 0; r < h.rows(); r++) {
            checks_[r] = h.row(r);
            generators_.emplace_back(kN, h.row(r), 0);
        }
        for (std::size_t r = 0; r < h.rows(); r++) {
            generators_.emplace_back(kN, 0, h.row(r));
        }
        logical_x_ = PauliOperator(kN, 0x7F, 0);
        logical_z_ = PauliOperator(kN, 0, 0x7F);
        for (std::uint32_t m = 0; m < 8; m++) {
            Bits acc = 0;
            for (std::size_t r = 0; r < 3; r++) {
                if ((m >> r) & 1) {
                    acc ^= checks_[r];
                }
            }
            span_[m] = acc;
        }
        for (std::uint32_t q = 0; q < kN; q++) {
            syndrome_to_qubit_[h.column(q)] = static_cast<int>(q);
        }
        syndrome_to_qubit_[0] = -1;
    }

    static constexpr std::uint32_t kN = 7;

    const std::vector<PauliOperator>& generators() const { return generators_; }
    const PauliOperator& logical_x() const { return logical_x_; }
    const PauliOperator& logical_z() const { return logical_z_; }

    /// Syndrome of a 7-bit pattern under the checks (bit r = check r).
    Bits syndrome(Bits pattern) const {
        Bits s = 0;
        for (std::size_t r = 0; r < 3; r++) {
            if (parity(checks_[r] & pattern)) {
                s |= Bits{1} << r;
            }
        }
        return s;
    }

    /// Single-qubit pattern with the given syndrome (0 for the zero syndrome).
    Bits lookup(Bits syndrome) const {
        int q = syndrome_to_qubit_[syndrome & 7];
        return q < 0 ? 0 : (Bits{1} << q);
    }

    /// Minimum weight of pattern + span(checks).
    int coset_weight(Bits pattern) const {
        int best = 64;
        for (Bits s : span_) {
            best = std::min(best, std::popcount(pattern ^ s));
        }
        return best;
    }

    /// True iff the pattern is a sum of checks.
    bool in_span(Bits pattern) const {
        for (Bits s : span_) {
            if (s == pattern) {
                return true;
            }
        }
        return false;
    }

    /// Classifies e up to stabilizers. e must be supported on data qubits (the
    /// first seven qubits of its register).
    Reduction reduce(const PauliOperator& e) const {
        Bits data = CheckMatrix::column_mask(kN);
        if ((e.x() | e.z()) & ~data) {
            throw std::invalid_argument("reduce_mod_stabilizers: support outside data qubits in " + e.str());
        }
        Reduction out;
        out.x_weight = coset_weight(e.x());
        out.z_weight = coset_weight(e.z());

        PauliOperator best(e.num_qubits(), e.x(), e.z());
        for (Bits sx : span_) {
            for (Bits sz : span_) {
                PauliOperator cand(e.num_qubits(), e.x() ^ sx, e.z() ^ sz);
                if (detail::rep_less(cand, best)) {
                    best = cand;
                }
            }
        }
        out.min_weight_rep = best;

        if (e.is_identity()) {
            out.cls = ErrorClass::Identity;
            return out;
        }
        // Apply the lookup correction per part; what is left is a logical
        // operator times a stabilizer.
        Bits rx = e.x() ^ lookup(syndrome(e.x()));
        Bits rz = e.z() ^ lookup(syndrome(e.z()));
        bool lx = !in_span(rx);
        bool lz = !in_span(rz);
        out.cls = lx ? (lz ? ErrorClass::LogicalY : ErrorClass::LogicalX)
                     : (lz ? ErrorClass::LogicalZ : ErrorClass::Stabilizer);
        return out;
    }

    bool contains(const PauliOperator& e) const {
        if ((e.x() | e.z()) & ~CheckMatrix::column_mask(kN)) {
            return false;
        }
        return in_span(e.x()) && in_span(e.z());
    }

   private:
    std::array<Bits, 3> checks_{};
    std::array<Bits, 8> span_{};
    std::array<int, 8> syndrome_to_qubit_{};
    std::vector<PauliOperator> generators_;
    PauliOperator logical_x_;
    PauliOperator logical_z_;
};

inline const StabilizerGroup& steane_code() {
    static const StabilizerGroup g;
    return g;
}

inline Reduction reduce_mod_stabilizers(const PauliOperator& e) {
    return steane_code().reduce(e);
}

}  // namespace steane
