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


#include "steane/search.hpp"

#include <algorithm>
#include <array>

#include "gtest/gtest.h"
#include "steane/fault_enum.hpp"
#include "test_util.hpp"

using namespace steane;
using namespace steane::testing;

namespace {

const BfsTable& table() {
    static const BfsTable t;
    return t;
}

MatrixState permute_rows(MatrixState s, const std::array<int, 3>& perm) {
    MatrixState out = 0;
    for (int r = 0; r < 3; r++) {
        out |= ((s >> (7 * perm[r])) & kRowMask) << (7 * r);
    }
    return out;
}

Circuit toy_base(std::initializer_list<std::uint32_t> data) {
    QubitRegister reg{7, 1, 0};
    std::vector<Instruction> ins{Instruction::reset(Basis::Z, reg.ancilla(0))};
    for (std::uint32_t d : data) {
        ins.push_back(Instruction::cnot(reg.data(d), reg.ancilla(0)));
    }
    ins.push_back(Instruction::measure(Basis::Z, reg.ancilla(0), {OutputSlot::Kind::Syndrome, 0}));
    return schedule(reg, Basis::Z, ins);
}

}  // namespace

TEST(search, pack_roundtrip) {
    ASSERT_EQ(unpack(pack(steane_parity_checks())), steane_parity_checks());
    ASSERT_EQ(pack(CheckMatrix(3, 7)), 0u);
    ASSERT_THROW(pack(CheckMatrix(2, 7)), std::invalid_argument);
}

TEST(search, moves) {
    const auto& m = search_moves();
    ASSERT_EQ(m.size(), 27u);
    ASSERT_EQ(m[0], SearchMove::flip(0, 0));
    ASSERT_EQ(m[20], SearchMove::flip(2, 6));
    ASSERT_EQ(m[21], SearchMove::row_add(0, 1));
    ASSERT_EQ(m[26], SearchMove::row_add(2, 1));
    for (std::size_t k = 0; k < m.size(); k++) {
        ASSERT_EQ(move_index(m[k]), k);
        // Every move is an involution.
        ASSERT_EQ(m[k].apply(m[k].apply(0x12345)), 0x12345u);
    }
}

TEST(search, distances) {
    const BfsTable& t = table();
    ASSERT_EQ(t.visited(), kNumStates);
    ASSERT_EQ(t.distance(steane_parity_checks()), 11);
    ASSERT_EQ(t.distance(effective_target()), 11);
    ASSERT_EQ(t.distance(MatrixState{0}), 0);
    ASSERT_EQ(t.distance(MatrixState{1} << 9), 1);
    ASSERT_EQ(t.eccentricity(), 11);
    std::vector<std::size_t> expected{1,      21,     210,    1393,   7119,   29813,
                                      102011, 270735, 513124, 629581, 433944, 109200};
    ASSERT_EQ(t.layer_sizes(), expected);
}

TEST(search, geodesic_counts) {
    const BfsTable& t = table();
    ASSERT_EQ(t.path_counts()[pack(steane_parity_checks())], 14'398'224u);
    ASSERT_EQ(t.path_counts()[0], 1u);
    ASSERT_EQ(t.path_counts()[1], 1u);
}

TEST(search, row_permutation_symmetry) {
    const BfsTable& t = table();
    const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    CounterRng rng(77, 0);
    for (int i = 0; i < 2000; i++) {
        MatrixState s = static_cast<MatrixState>(rng.next() & (kNumStates - 1));
        for (const auto& p : perms) {
            ASSERT_EQ(t.distance(permute_rows(s, p)), t.distance(s));
        }
    }
}

TEST(search, bfs_summary) {
    BfsSummary s = bfs_min_cnots(table(), steane_parity_checks());
    ASSERT_EQ(s.distance, 11);
    ASSERT_EQ(s.geodesic.size(), 11u);
    MatrixState v = 0;
    for (const auto& mv : s.geodesic) {
        v = mv.apply(v);
    }
    ASSERT_EQ(v, pack(steane_parity_checks()));
}

TEST(search, extract_circuit) {
    MovePath naive;
    CheckMatrix h = steane_parity_checks();
    for (std::uint8_t r = 0; r < 3; r++) {
        for (std::uint8_t c = 0; c < 7; c++) {
            if (h.get(r, c)) {
                naive.push_back(SearchMove::flip(r, c));
            }
        }
    }
    Circuit c = extract_circuit(naive);
    ASSERT_EQ(c.cnot_count(), 12u);
    ASSERT_EQ(c, naive_h_circuit());
    ASSERT_THROW(extract_circuit({}), std::invalid_argument);
    MovePath short_path(naive.begin(), naive.end() - 1);
    ASSERT_THROW(extract_circuit(short_path), std::invalid_argument);

    MovePath geo = table().geodesic(pack(h));
    Circuit g = extract_circuit(geo);
    ASSERT_EQ(g.cnot_count(), 11u);
    ASSERT_EQ(measured_matrix(g), h);
}

TEST(search, enumerated_geodesics_reach_target) {
    CheckMatrix target = effective_target();
    auto paths = collect_geodesics(table(), target, {200, false});
    ASSERT_EQ(paths.size(), 200u);
    for (const auto& p : paths) {
        ASSERT_EQ(p.size(), 11u);
        ASSERT_EQ(measured_matrix(extract_circuit(p, target)), target);
    }
    auto single = collect_geodesics(table(), target, {50, true});
    for (const auto& p : single) {
        std::uint32_t cols = 0;
        for (const auto& mv : p) {
            if (mv.kind == SearchMove::Kind::EntryFlip) {
                ASSERT_FALSE(cols & (1u << mv.b));
                cols |= 1u << mv.b;
            }
        }
    }
}

TEST(search, sampled_geodesics_are_shortest) {
    CounterRng rng(3, 1);
    for (int i = 0; i < 100; i++) {
        MovePath p = sample_geodesic(table(), steane_parity_checks(), rng);
        ASSERT_EQ(p.size(), 11u);
        ASSERT_EQ(measured_matrix(extract_circuit(p)), steane_parity_checks());
    }
}

TEST(search, toy_flag_counts) {
    ASSERT_EQ(min_flag_cnots(toy_base({0}), 3).m, 0);
    ASSERT_EQ(min_flag_cnots(toy_base({0}), 3).dangerous, 0u);
    // Weight-four check: one hook location between the second and third CNOT.
    FlagSearchResult r = min_flag_cnots(toy_base({0, 1, 2, 3}), 3);
    ASSERT_EQ(r.dangerous, 1u);
    ASSERT_EQ(r.m, 2);
    ASSERT_FALSE(r.witnesses.empty());
    ASSERT_FALSE(min_flag_cnots(toy_base({0, 1, 2, 3}), 1).m.has_value());
}

TEST(search, sampled_geodesics_need_three_flag_cnots) {
    CounterRng rng(8, 0);
    for (int i = 0; i < 20; i++) {
        Circuit base = extract_circuit(sample_geodesic(table(), steane_parity_checks(), rng));
        FlagSearchResult r = min_flag_cnots(base, 2, false);
        ASSERT_FALSE(r.m.has_value()) << "geodesic " << i;
    }
}

TEST(search, canonical_derivation_matches_shipped_circuits) {
    CanonicalCircuits c = derive_canonical(table());
    ASSERT_EQ(to_string(c.geodesic),
              "F(1,3) R(1,2) F(0,6) R(0,2) F(0,5) R(0,1) F(0,0) R(0,2) F(2,4) F(1,2) F(0,1)");
    ASSERT_EQ(c.flags.m, 3);
    ASSERT_EQ(c.flags.witnesses.size(), 117u);
    ASSERT_EQ(c.witness.orientation, FlagOrientation::X);
    ASSERT_TRUE(c.report.all_pass());
    ASSERT_EQ(c.primary, shipped_primary());
    ASSERT_EQ(c.recovery, shipped_recovery());
    ASSERT_EQ(hook_cosets(c.base), default_hook_cosets());

    // The witness really flags every hook: checked by the fault oracle.
    for (const auto& e : dangerous_faults(c.primary)) {
        ASSERT_TRUE(e.flag_flip());
    }
}
