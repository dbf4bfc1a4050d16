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


#include "steane/fault_enum.hpp"

#include <map>
#include <set>

#include "gtest/gtest.h"
#include "steane/decoder.hpp"
#include "steane/fault_tolerance.hpp"
#include "test_util.hpp"

using namespace steane;
using namespace steane::testing;

namespace {

std::size_t expected_location_count(const Circuit& c) {
    std::size_t n = 0;
    for (const auto& ins : c.instructions()) {
        n += ins.is_cnot() ? 15 : ins.is_reset() ? 3 : 4;
    }
    for (Bits m : idle_masks(c)) {
        n += std::popcount(m);
    }
    return n;
}

}  // namespace

TEST(fault_enum, location_counts) {
    for (const Circuit* c : {&shipped_primary(), &shipped_recovery()}) {
        ASSERT_EQ(enumerate_faults(*c).size(), expected_location_count(*c));
        ASSERT_EQ(enumerate_faults(dualize(*c)).size(), expected_location_count(*c));
    }
    ASSERT_EQ(enumerate_faults(shipped_primary()).size(), 318u);
    ASSERT_EQ(enumerate_faults(shipped_recovery()).size(), 256u);
}

TEST(fault_enum, locations_are_distinct) {
    auto faults = enumerate_faults(shipped_primary());
    for (std::size_t i = 0; i < faults.size(); i++) {
        for (std::size_t j = i + 1; j < faults.size(); j++) {
            ASSERT_FALSE(faults[i] == faults[j]) << faults[i].str(shipped_primary().reg);
        }
    }
}

TEST(fault_enum, primary_dangerous_set) {
    const Circuit& p = shipped_primary();
    auto bad = dangerous_faults(p);
    ASSERT_EQ(bad.size(), 23u);
    std::set<std::string> cosets;
    for (const auto& e : bad) {
        ASSERT_TRUE(e.flag_flip()) << e.location.str(p.reg);
        ASSERT_LE(e.reduction.x_weight, 1) << e.location.str(p.reg);
        ASSERT_EQ(e.reduction.z_weight, 2) << e.location.str(p.reg);
        cosets.insert(pattern_to_pauli(detail::coset_rep(e.residual_data.z()), 'Z').str());
    }
    ASSERT_EQ(cosets, (std::set<std::string>{"Z1.Z2", "Z2.Z5"}));
}

TEST(fault_enum, recovery_has_hooks) {
    auto bad = dangerous_faults(shipped_recovery());
    ASSERT_EQ(bad.size(), 23u);
    for (const auto& e : bad) {
        ASSERT_EQ(e.flag_flips, 0u);
    }
}

TEST(fault_enum, late_ancilla_fault_flips_only_its_bit) {
    const Circuit& c = shipped_recovery();
    // An X on an ancilla right before its Z measurement flips that bit alone.
    for (const auto& f : enumerate_faults(c)) {
        if (f.kind == SiteKind::BeforeMeasure && f.pauli.at(c.layers[f.layer][f.instr].q0) == 'X') {
            FaultEffect e = propagate(c, f);
            ASSERT_EQ(e.bit_flips, Bits{1} << c.layers[f.layer][f.instr].slot.index);
            ASSERT_TRUE(e.residual_data.is_identity());
        }
        if (f.kind == SiteKind::MeasureFlip) {
            FaultEffect e = propagate(c, f);
            ASSERT_EQ(std::popcount(e.bit_flips), 1);
            ASSERT_TRUE(e.residual_data.is_identity());
        }
    }
}

TEST(fault_enum, propagate_input_matches_syndrome) {
    const Circuit& c = shipped_primary();
    for (Bits x = 0; x < 128; x++) {
        FaultEffect e = propagate_input(c, PauliOperator(c.reg.size(), x, 0));
        ASSERT_EQ(c.syndrome_map.to_standard.apply(e.bit_flips), steane_code().syndrome(x));
        ASSERT_EQ(e.residual_data, PauliOperator(7, x, 0));
    }
    ASSERT_THROW(propagate_input(c, PauliOperator::single(c.reg.size(), 8, 'X')), std::invalid_argument);
}

TEST(fault_enum, unflagged_faults_benign) {
    const Circuit& p = shipped_primary();
    DecoderTables t = build_remap(p, dualize(shipped_recovery()));
    std::size_t unflagged = 0;
    for (const auto& f : enumerate_faults(p)) {
        FaultEffect e = propagate(p, f);
        if (e.flag_flip()) {
            continue;
        }
        unflagged++;
        PauliOperator after = e.residual_data * decode_standard(t, raw_to_syndrome(t.primary_map, e.bit_flips));
        ASSERT_LE(reduce_mod_stabilizers(after).css_weight(), 1) << f.str(p.reg);
    }
    ASSERT_EQ(unflagged, 318u - 86u);
}

TEST(fault_enum, flagged_counts_per_basis) {
    auto flagged = [](const Circuit& c) {
        std::size_t n = 0;
        for (const auto& e : propagate_all(c)) {
            n += e.flag_flip();
        }
        return n;
    };
    // Idle noise is Z only, so the two bases differ.
    ASSERT_EQ(flagged(shipped_primary()), 86u);
    ASSERT_EQ(flagged(dualize(shipped_primary())), 77u);
}

TEST(fault_enum, hook_cosets_have_distinct_recovery_syndromes) {
    const Circuit rec = dualize(shipped_recovery());
    std::map<Bits, Bits> coset_to_syndrome;
    for (const auto& e : dangerous_faults(shipped_primary())) {
        Bits rep = detail::coset_rep(e.residual_data.z());
        Bits s = rec.syndrome_map.to_standard.apply(noiseless_bits(rec, e.residual_data));
        auto [it, fresh] = coset_to_syndrome.emplace(rep, s);
        ASSERT_EQ(it->second, s);
    }
    ASSERT_EQ(coset_to_syndrome.size(), 2u);
    ASSERT_NE(coset_to_syndrome.begin()->second, coset_to_syndrome.rbegin()->second);
}

TEST(fault_enum, weight_three_residual_can_be_benign) {
    Reduction r = reduce_mod_stabilizers(PauliOperator::parse("Z1.Z2.Z3"));
    ASSERT_EQ(r.css_weight(), 1);
    ASSERT_EQ(r.min_weight_rep, PauliOperator::parse("Z4"));
    ASSERT_FALSE(r.logical());
}

TEST(fault_enum, ft_conditions_hold) {
    const Circuit& p = shipped_primary();
    const Circuit& r = shipped_recovery();
    for (bool x : {false, true}) {
        Circuit pp = x ? dualize(p) : p;
        Circuit rr = x ? r : dualize(r);
        FtReport rep = verify_ft_conditions(pp, rr, build_remap(pp, rr));
        ASSERT_TRUE(rep.all_pass()) << rep.summary();
        ASSERT_EQ(rep.summary(), "(i) PASS (ii)(a) PASS (ii)(b) PASS");
        ASSERT_EQ(rep.data_errors_checked, 21u);
        ASSERT_EQ(rep.faults_checked, 318u);
        ASSERT_EQ(rep.flagged_faults, x ? 77u : 86u);
    }
}

TEST(fault_enum, removing_flag_breaks_condition_a) {
    // The recovery circuit is the primary with its flag stripped.
    const Circuit& base = shipped_recovery();
    Circuit rec = dualize(base);
    FtReport rep = verify_ft_conditions(base, rec, build_remap(base, rec));
    ASSERT_FALSE(rep.unflagged_faults_benign);
    ASSERT_EQ(rep.unflagged_failures.size(), 23u);
    ASSERT_TRUE(rep.data_errors_corrected);
}

TEST(fault_enum, plain_lookup_breaks_condition_b) {
    const Circuit& p = shipped_primary();
    Circuit rec = dualize(shipped_recovery());
    FtReport rep = verify_ft_conditions(p, rec, standard_tables(p, rec));
    ASSERT_TRUE(rep.unflagged_faults_benign);
    ASSERT_FALSE(rep.flagged_faults_recovered);
    ASSERT_EQ(rep.summary(), "(i) PASS (ii)(a) PASS (ii)(b) FAIL");
}
