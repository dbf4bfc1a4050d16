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
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "steane/circuit.hpp"
#include "steane/code_tables.hpp"
#include "steane/decoder.hpp"
#include "steane/fault_tolerance.hpp"
#include "steane/noise_sim.hpp"

namespace steane {

// ---------------------------------------------------------------------------
// State space: 3x7 binary matrices packed row-major, entry (i, j) at bit 7i+j.

using MatrixState = std::uint32_t;

inline constexpr std::uint32_t kSearchRows = 3;
inline constexpr std::uint32_t kSearchCols = 7;
inline constexpr std::uint32_t kStateBits = kSearchRows * kSearchCols;
inline constexpr std::size_t kNumStates = std::size_t{1} << kStateBits;
inline constexpr std::uint32_t kRowMask = (1u << kSearchCols) - 1;

inline MatrixState pack(const CheckMatrix& m) {
    if (m.rows() != kSearchRows || m.cols() != kSearchCols) {
        throw std::invalid_argument("search target must be 3x7");
    }
    MatrixState s = 0;
    for (std::uint32_t r = 0; r < kSearchRows; r++) {
        s |= static_cast<MatrixState>(m.row(r)) << (kSearchCols * r);
    }
    return s;
}

inline CheckMatrix unpack(MatrixState s) {
    std::vector<Bits> rows;
    for (std::uint32_t r = 0; r < kSearchRows; r++) {
        rows.push_back((s >> (kSearchCols * r)) & kRowMask);
    }
    return CheckMatrix::from_rows(kSearchCols, rows);
}

/// EntryFlip(i, j) is CNOT d_j -> a_i; RowAdd(r, s) adds row r into row s
/// and is CNOT a_r -> a_s.
struct SearchMove {
    enum class Kind : std::uint8_t { EntryFlip, RowAdd };
    Kind kind = Kind::EntryFlip;
    std::uint8_t a = 0;  ///< row i, or source row r
    std::uint8_t b = 0;  ///< column j, or destination row s

    static SearchMove flip(std::uint8_t i, std::uint8_t j) { return {Kind::EntryFlip, i, j}; }
    static SearchMove row_add(std::uint8_t r, std::uint8_t s) { return {Kind::RowAdd, r, s}; }

    MatrixState apply(MatrixState m) const {
        if (kind == Kind::EntryFlip) {
            return m ^ (MatrixState{1} << (kSearchCols * a + b));
        }
        return m ^ (((m >> (kSearchCols * a)) & kRowMask) << (kSearchCols * b));
    }

    /// Ancillas the move touches, as a bitmask.
    std::uint32_t ancillas() const { return kind == Kind::EntryFlip ? 1u << a : (1u << a) | (1u << b); }

    std::string str() const {
        return kind == Kind::EntryFlip ? "F(" + std::to_string(a) + "," + std::to_string(b) + ")"
                                       : "R(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }

    bool operator==(const SearchMove&) const = default;
};

/// 21 entry flips row-major, then the 6 row additions in lexicographic (r, s).
inline const std::array<SearchMove, 27>& search_moves() {
    static const std::array<SearchMove, 27> moves = [] {
        std::array<SearchMove, 27> m{};
        std::size_t k = 0;
        for (std::uint8_t i = 0; i < kSearchRows; i++) {
            for (std::uint8_t j = 0; j < kSearchCols; j++) {
                m[k++] = SearchMove::flip(i, j);
            }
        }
        for (std::uint8_t r = 0; r < kSearchRows; r++) {
            for (std::uint8_t s = 0; s < kSearchRows; s++) {
                if (r != s) {
                    m[k++] = SearchMove::row_add(r, s);
                }
            }
        }
        return m;
    }();
    return moves;
}

inline std::size_t move_index(const SearchMove& mv) {
    const auto& all = search_moves();
    return static_cast<std::size_t>(std::find(all.begin(), all.end(), mv) - all.begin());
}

using MovePath = std::vector<SearchMove>;

inline std::string to_string(const MovePath& path) {
    std::string out;
    for (const auto& mv : path) {
        out += (out.empty() ? "" : " ") + mv.str();
    }
    return out;
}

/// Breadth-first search from the zero matrix over all 2^21 states. Moves are
/// their own inverses, so the graph is undirected.
class BfsTable {
   public:
    static constexpr std::uint8_t kUnvisited = 0xFF;

    BfsTable() : dist_(kNumStates, kUnvisited), parent_(kNumStates, 0xFF) {
        order_.reserve(kNumStates);
        dist_[0] = 0;
        order_.push_back(0);
        const auto& moves = search_moves();
        for (std::size_t head = 0; head < order_.size(); head++) {
            MatrixState v = order_[head];
            for (std::size_t k = 0; k < moves.size(); k++) {
                MatrixState w = moves[k].apply(v);
                if (dist_[w] == kUnvisited) {
                    dist_[w] = static_cast<std::uint8_t>(dist_[v] + 1);
                    parent_[w] = static_cast<std::uint8_t>(k);
                    order_.push_back(w);
                }
            }
        }
    }

    int distance(MatrixState s) const { return dist_.at(s); }
    int distance(const CheckMatrix& m) const { return distance(pack(m)); }
    int eccentricity() const { return dist_[order_.back()]; }
    std::size_t visited() const { return order_.size(); }

    /// Number of states at each distance.
    std::vector<std::size_t> layer_sizes() const {
        std::vector<std::size_t> out(eccentricity() + 1, 0);
        for (MatrixState s : order_) {
            out[dist_[s]]++;
        }
        return out;
    }

    /// Shortest path following the parent links.
    MovePath geodesic(MatrixState target) const {
        MovePath rev;
        for (MatrixState v = target; v != 0;) {
            const SearchMove& mv = search_moves()[parent_[v]];
            rev.push_back(mv);
            v = mv.apply(v);
        }
        return {rev.rbegin(), rev.rend()};
    }

    /// Number of distinct shortest move sequences from zero to each state.
    const std::vector<std::uint64_t>& path_counts() const {
        if (counts_.empty()) {
            counts_.assign(kNumStates, 0);
            counts_[0] = 1;
            for (MatrixState v : order_) {
                for (const auto& mv : search_moves()) {
                    MatrixState w = mv.apply(v);
                    if (dist_[w] == dist_[v] + 1) {
                        counts_[w] += counts_[v];
                    }
                }
            }
        }
        return counts_;
    }

    /// Predecessor moves of `v` along shortest paths, in move order.
    template <typename Fn>
    void for_each_predecessor(MatrixState v, Fn&& fn) const {
        const auto& moves = search_moves();
        for (std::size_t k = 0; k < moves.size(); k++) {
            MatrixState u = moves[k].apply(v);
            if (dist_[u] + 1 == dist_[v]) {
                fn(moves[k], u);
            }
        }
    }

   private:
    std::vector<std::uint8_t> dist_;
    std::vector<std::uint8_t> parent_;
    std::vector<MatrixState> order_;
    mutable std::vector<std::uint64_t> counts_;
};

struct BfsSummary {
    int distance = 0;
    MovePath geodesic;
};

inline BfsSummary bfs_min_cnots(const BfsTable& table, const CheckMatrix& target) {
    MatrixState t = pack(target);
    return {table.distance(t), table.geodesic(t)};
}

/// Builds the Z-basis extraction circuit of a move sequence: resets, the
/// CNOTs in order, then one measurement per ancilla into b_i. The measured
/// matrix is the sequence's end state; the map is solved against H.
inline Circuit extract_circuit(const MovePath& path, const CheckMatrix& target = steane_parity_checks()) {
    if (path.empty()) {
        throw std::invalid_argument("empty move list");
    }
    MatrixState s = 0;
    for (const auto& mv : path) {
        s = mv.apply(s);
    }
    if (s != pack(target)) {
        throw std::invalid_argument("move list reaches\n" + unpack(s).str() + "\ninstead of the target");
    }
    QubitRegister reg{7, kSearchRows, 0};
    std::vector<Instruction> instrs;
    for (std::uint32_t i = 0; i < kSearchRows; i++) {
        instrs.push_back(Instruction::reset(Basis::Z, reg.ancilla(i)));
    }
    for (const auto& mv : path) {
        if (mv.kind == SearchMove::Kind::EntryFlip) {
            instrs.push_back(Instruction::cnot(reg.data(mv.b), reg.ancilla(mv.a)));
        } else {
            instrs.push_back(Instruction::cnot(reg.ancilla(mv.a), reg.ancilla(mv.b)));
        }
    }
    for (std::uint32_t i = 0; i < kSearchRows; i++) {
        instrs.push_back(Instruction::measure(Basis::Z, reg.ancilla(i), {OutputSlot::Kind::Syndrome, i}));
    }
    Circuit c = schedule(reg, Basis::Z, instrs, solve_to_standard(target));
    validate(c);
    return c;
}

namespace detail {

/// Lexicographically smallest reordering of `path` that keeps the order of
/// moves sharing an ancilla, packed 5 bits per move. Equal keys mean equal
/// per-ancilla touch sequences.
inline std::uint64_t canonical_key(const MovePath& path) {
    const std::size_t n = path.size();
    std::vector<bool> used(n, false);
    std::uint64_t key = 0;
    for (std::size_t step = 0; step < n; step++) {
        std::uint32_t blocked = 0;
        std::size_t best = n;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < n; i++) {
            if (used[i]) {
                continue;
            }
            std::uint32_t anc = path[i].ancillas();
            if (!(anc & blocked)) {
                std::size_t idx = move_index(path[i]);
                if (best == n || idx < best_idx) {
                    best = i;
                    best_idx = idx;
                }
            }
            blocked |= anc;
        }
        used[best] = true;
        key = key * 32 + best_idx;
    }
    return key;
}

}  // namespace detail

struct GeodesicOptions {
    std::size_t limit = 0;          ///< 0 = no limit
    bool single_coupling = false;   ///< each data qubit meets the ancillas once
};

/// Streams shortest move sequences to `target` in depth-first predecessor
/// order, one per set of per-ancilla touch sequences. `visit` returns false
/// to stop. Returns the number of sequences visited.
inline std::size_t enumerate_geodesics(const BfsTable& table, const CheckMatrix& target, const GeodesicOptions& opt,
                                       const std::function<bool(const MovePath&)>& visit) {
    MatrixState t = pack(target);
    std::unordered_set<std::uint64_t> seen;
    std::size_t emitted = 0;
    bool stop = false;
    MovePath rev;
    std::uint32_t flipped_cols = 0;
    std::function<void(MatrixState)> dfs = [&](MatrixState v) {
        if (stop) {
            return;
        }
        if (v == 0) {
            MovePath path(rev.rbegin(), rev.rend());
            if (seen.insert(detail::canonical_key(path)).second) {
                emitted++;
                if (!visit(path) || (opt.limit && emitted >= opt.limit)) {
                    stop = true;
                }
            }
            return;
        }
        table.for_each_predecessor(v, [&](const SearchMove& mv, MatrixState u) {
            if (stop) {
                return;
            }
            std::uint32_t col = mv.kind == SearchMove::Kind::EntryFlip ? 1u << mv.b : 0;
            if (opt.single_coupling && (flipped_cols & col)) {
                return;
            }
            flipped_cols |= col;
            rev.push_back(mv);
            dfs(u);
            rev.pop_back();
            flipped_cols &= ~col;
        });
    };
    dfs(t);
    return emitted;
}

inline std::vector<MovePath> collect_geodesics(const BfsTable& table, const CheckMatrix& target,
                                               const GeodesicOptions& opt) {
    std::vector<MovePath> out;
    enumerate_geodesics(table, target, opt, [&](const MovePath& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

/// Uniformly random shortest move sequence to `target`.
inline MovePath sample_geodesic(const BfsTable& table, const CheckMatrix& target, CounterRng& rng) {
    const auto& counts = table.path_counts();
    MatrixState v = pack(target);
    MovePath rev;
    while (v != 0) {
        std::uint64_t total = counts[v];
        std::uint64_t r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng.next()) * total) >> 64);
        std::optional<SearchMove> pick;
        MatrixState next = 0;
        table.for_each_predecessor(v, [&](const SearchMove& mv, MatrixState u) {
            if (pick) {
                return;
            }
            if (r < counts[u]) {
                pick = mv;
                next = u;
            } else {
                r -= counts[u];
            }
        });
        rev.push_back(*pick);
        v = next;
    }
    return {rev.rbegin(), rev.rend()};
}

// ---------------------------------------------------------------------------
// Flag search.

enum class FlagOrientation : std::uint8_t { X, Z };

inline const char* to_string(FlagOrientation o) { return o == FlagOrientation::X ? "X" : "Z"; }

/// X: flag reset and measured in X, CNOT flag -> ancilla.
/// Z: flag reset and measured in Z, CNOT ancilla -> flag.
struct FlagPlacement {
    FlagOrientation orientation = FlagOrientation::X;
    /// (gap, ancilla index) pairs; gap g sits before the g-th base CNOT, gap
    /// n after the last one. Sorted.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> couplings;

    bool operator==(const FlagPlacement&) const = default;
};

struct FlagSearchResult {
    std::optional<int> m;  ///< minimal number of flag CNOTs; empty if above max_extra
    int max_extra = 0;
    std::size_t dangerous = 0;  ///< hook faults of the base circuit
    std::vector<FlagPlacement> witnesses;  ///< all placements at k = m, in search order
};

namespace detail {

struct GateList {
    std::uint32_t n_qubits = 0;
    Bits data_mask = 0;
    Bits anc_mask = 0;
    std::uint32_t flag = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> gates;
};

inline void forward(const GateList& g, std::size_t from, Bits& x, Bits& z) {
    for (std::size_t k = from; k < g.gates.size(); k++) {
        auto [c, t] = g.gates[k];
        if ((x >> c) & 1) x ^= Bits{1} << t;
        if ((z >> t) & 1) z ^= Bits{1} << c;
    }
}

inline void backward(const GateList& g, Bits& x, Bits& z) {
    for (std::size_t k = g.gates.size(); k-- > 0;) {
        auto [c, t] = g.gates[k];
        if ((x >> c) & 1) x ^= Bits{1} << t;
        if ((z >> t) & 1) z ^= Bits{1} << c;
    }
}

/// Data Z left by every ancilla-Z fault whose residual has coset weight >= 2,
/// paired with a bool telling whether the flag saw it.
template <typename Fn>
void for_each_hook(const GateList& g, std::optional<FlagOrientation> flag, Fn&& fn) {
    const StabilizerGroup& code = steane_code();
    for (std::uint32_t q = 0; q < g.n_qubits; q++) {
        if (!((g.anc_mask >> q) & 1)) {
            continue;
        }
        auto try_at = [&](std::size_t from) {
            Bits x = 0;
            Bits z = Bits{1} << q;
            forward(g, from, x, z);
            if (code.coset_weight(z & g.data_mask) >= 2) {
                bool seen = flag && (*flag == FlagOrientation::X ? (z >> g.flag) & 1 : (x >> g.flag) & 1);
                fn(z & g.data_mask, seen);
            }
        };
        try_at(0);
        for (std::size_t k = 0; k < g.gates.size(); k++) {
            if (g.gates[k].first == q || g.gates[k].second == q) {
                try_at(k + 1);
            }
        }
    }
}

}  // namespace detail

/// Data Z patterns of the dangerous ancilla-Z faults of a Z-basis circuit,
/// as coset representatives.
inline std::set<Bits> hook_cosets(const Circuit& base) {
    const Circuit z = base.basis == Basis::Z ? base : dualize(base);
    detail::GateList g;
    g.n_qubits = z.reg.size();
    g.data_mask = z.reg.data_mask();
    for (std::uint32_t i = 0; i < z.reg.n_ancilla; i++) g.anc_mask |= Bits{1} << z.reg.ancilla(i);
    for (std::uint32_t i = 0; i < z.reg.n_flag; i++) g.anc_mask |= Bits{1} << z.reg.flag(i);
    for (const auto& ins : z.instructions()) {
        if (ins.is_cnot()) g.gates.emplace_back(ins.q0, ins.q1);
    }
    std::set<Bits> out;
    detail::for_each_hook(g, std::nullopt, [&](Bits data_z, bool) { out.insert(detail::coset_rep(data_z)); });
    return out;
}

/// Inserts the flag couplings into a flagless Z-basis base circuit.
inline Circuit place_flag(const Circuit& base, const FlagPlacement& placement) {
    if (base.basis != Basis::Z || base.reg.n_flag != 0) {
        throw std::invalid_argument("flag placement needs a flagless Z-basis base circuit");
    }
    QubitRegister reg{base.reg.n_data, base.reg.n_ancilla, 1};
    const std::uint32_t f = reg.flag(0);
    const Basis fb = placement.orientation == FlagOrientation::X ? Basis::X : Basis::Z;
    std::vector<Instruction> pre, gates, post;
    pre.push_back(Instruction::reset(fb, f));
    for (const auto& ins : base.instructions()) {
        (ins.is_reset() ? pre : ins.is_cnot() ? gates : post).push_back(ins);
    }
    std::vector<Instruction> instrs = pre;
    std::size_t ci = 0;
    auto coupling = [&](std::uint32_t anc) {
        std::uint32_t a = reg.ancilla(anc);
        return placement.orientation == FlagOrientation::X ? Instruction::cnot(f, a) : Instruction::cnot(a, f);
    };
    for (std::uint32_t gap = 0; gap <= gates.size(); gap++) {
        while (ci < placement.couplings.size() && placement.couplings[ci].first == gap) {
            instrs.push_back(coupling(placement.couplings[ci].second));
            ci++;
        }
        if (gap < gates.size()) {
            instrs.push_back(gates[gap]);
        }
    }
    if (ci != placement.couplings.size()) {
        throw std::invalid_argument("flag coupling gap out of range");
    }
    instrs.insert(instrs.end(), post.begin(), post.end());
    instrs.push_back(Instruction::measure(fb, f, {OutputSlot::Kind::Flag, 0}));
    return schedule(reg, Basis::Z, instrs, base.syndrome_map);
}

/// Smallest k <= max_extra for which some placement of k flag CNOTs (both
/// orientations, every gap, every ancilla, repeats allowed) keeps all
/// measurements deterministic with unchanged syndrome observables and flags
/// every dangerous ancilla-Z fault. The base must be a flagless Z-basis
/// circuit whose ancillas are reset first and measured last.
inline FlagSearchResult min_flag_cnots(const Circuit& base, int max_extra, bool all_witnesses = true) {
    if (base.basis != Basis::Z || base.reg.n_flag != 0) {
        throw std::invalid_argument("min_flag_cnots needs a flagless Z-basis base circuit");
    }
    const QubitRegister& breg = base.reg;
    detail::GateList bg;
    bg.n_qubits = breg.size() + 1;
    bg.data_mask = breg.data_mask();
    bg.flag = breg.size();
    for (std::uint32_t i = 0; i < breg.n_ancilla; i++) bg.anc_mask |= Bits{1} << breg.ancilla(i);
    for (const auto& ins : base.instructions()) {
        if (ins.is_cnot()) bg.gates.emplace_back(ins.q0, ins.q1);
    }
    const std::size_t n = bg.gates.size();

    // Reference observables of the flagless circuit.
    std::vector<std::pair<Bits, Bits>> ref;
    for (std::uint32_t i = 0; i < breg.n_ancilla; i++) {
        Bits x = 0, z = Bits{1} << breg.ancilla(i);
        detail::backward(bg, x, z);
        ref.emplace_back(x, z);
    }

    FlagSearchResult res;
    res.max_extra = max_extra;
    detail::for_each_hook(bg, std::nullopt, [&](Bits, bool) { res.dangerous++; });
    if (res.dangerous == 0) {
        res.m = 0;
        res.witnesses.push_back({});
        return res;
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
    for (std::uint32_t g = 0; g <= n; g++) {
        for (std::uint32_t a = 0; a < breg.n_ancilla; a++) {
            slots.emplace_back(g, a);
        }
    }

    auto check = [&](FlagOrientation o, const std::vector<std::size_t>& pick) {
        detail::GateList g = bg;
        g.gates.clear();
        std::size_t pi = 0;
        for (std::uint32_t gap = 0; gap <= n; gap++) {
            while (pi < pick.size() && slots[pick[pi]].first == gap) {
                std::uint32_t a = breg.ancilla(slots[pick[pi]].second);
                g.gates.emplace_back(o == FlagOrientation::X ? std::pair{g.flag, a} : std::pair{a, g.flag});
                pi++;
            }
            if (gap < n) g.gates.push_back(bg.gates[gap]);
        }
        const Bits fbit = Bits{1} << g.flag;
        for (std::uint32_t i = 0; i < breg.n_ancilla; i++) {
            Bits x = 0, z = Bits{1} << breg.ancilla(i);
            detail::backward(g, x, z);
            // Ancillas start in |0>; the flag starts in |+> (X) or |0> (Z).
            bool flag_ok = o == FlagOrientation::X ? !(z & fbit) : !(x & fbit);
            if ((x & g.anc_mask) || !flag_ok || (x & ~fbit) != ref[i].first || (z & ~fbit) != ref[i].second) {
                return false;
            }
        }
        Bits fx = o == FlagOrientation::X ? fbit : 0;
        Bits fz = o == FlagOrientation::Z ? fbit : 0;
        detail::backward(g, fx, fz);
        // The flag must see no data and start in its own reset eigenstate.
        if (((fx | fz) & g.data_mask) || (fx & g.anc_mask)) {
            return false;
        }
        if (o == FlagOrientation::X ? (fz & fbit) : (fx & fbit)) {
            return false;
        }
        bool all = true;
        detail::for_each_hook(g, o, [&](Bits, bool seen) { all = all && seen; });
        return all;
    };

    for (int k = 1; k <= max_extra; k++) {
        for (FlagOrientation o : {FlagOrientation::X, FlagOrientation::Z}) {
            std::vector<std::size_t> pick(k, 0);
            while (true) {
                if (check(o, pick)) {
                    FlagPlacement p;
                    p.orientation = o;
                    for (std::size_t s : pick) p.couplings.push_back(slots[s]);
                    res.witnesses.push_back(std::move(p));
                    if (!all_witnesses) {
                        res.m = k;
                        return res;
                    }
                }
                // Next non-decreasing index tuple.
                int i = k - 1;
                while (i >= 0 && pick[i] == slots.size() - 1) i--;
                if (i < 0) break;
                pick[i]++;
                for (int j = i + 1; j < k; j++) pick[j] = pick[i];
            }
        }
        if (!res.witnesses.empty()) {
            res.m = k;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Canonical circuits.

/// M* = H'^{-1} H: the matrix whose measurement gives b with s = H' b.
inline CheckMatrix effective_target() {
    return gf2_inverse(effective_parity_checks()) * steane_parity_checks();
}

/// Hook cosets of the shipped primary circuit.
inline std::set<Bits> default_hook_cosets() {
    return {PauliOperator::parse("Z1.Z2").z(), PauliOperator::parse("Z2.Z5").z()};
}

struct CanonicalCircuits {
    MovePath geodesic;
    Circuit base;      ///< 11-CNOT flagless circuit, Z basis
    Circuit primary;   ///< base plus the flag, Z basis
    Circuit recovery;  ///< base, Z basis; run dualized after a Z-basis flag
    FlagSearchResult flags;
    FlagPlacement witness;
    DecoderTables tables;  ///< primary Z, recovery X
    FtReport report;
    std::size_t bases_tried = 0;
};

/// Deterministic derivation: walk single-coupling geodesics to M* in search
/// order, keep the first whose hook cosets equal `hooks` and which has a
/// minimal flag placement passing the full single-fault check.
inline CanonicalCircuits derive_canonical(const BfsTable& table,
                                          const std::set<Bits>& hooks = default_hook_cosets(),
                                          int max_extra = 3) {
    CheckMatrix target = effective_target();
    std::optional<CanonicalCircuits> found;
    std::size_t tried = 0;
    enumerate_geodesics(table, target, {0, true}, [&](const MovePath& path) {
        tried++;
        Circuit base = extract_circuit(path, target);
        if (hook_cosets(base) != hooks) {
            return true;
        }
        FlagSearchResult fr = min_flag_cnots(base, max_extra);
        if (!fr.m) {
            return true;
        }
        Circuit recovery_x = dualize(base);
        for (const auto& w : fr.witnesses) {
            Circuit primary = place_flag(base, w);
            try {
                validate(primary);
                DecoderTables t = build_remap(primary, recovery_x);
                FtReport rep = verify_ft_conditions(primary, recovery_x, t);
                if (!rep.all_pass()) {
                    continue;
                }
                found = CanonicalCircuits{path, base, primary, base, fr, w, t, rep, tried};
                return false;
            } catch (const RemapAmbiguityError&) {
                continue;
            }
        }
        return true;
    });
    if (!found) {
        throw std::runtime_error("no geodesic base circuit with the requested hooks admits a verified flag placement");
    }
    return *found;
}

}  // namespace steane
