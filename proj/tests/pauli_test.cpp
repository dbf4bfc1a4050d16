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

#include "steane/pauli.hpp"

#include <bit>

#include "gtest/gtest.h"

using namespace steane;

namespace {

PauliOperator P(const char* text) { return PauliOperator::parse(text); }

const PauliOperator& gen(int k) { return steane_code().generators()[k - 1]; }

}  // namespace

TEST(pauli, multiply) {
    ASSERT_EQ(P("Z2") * P("Z2"), P("I"));
    ASSERT_EQ(multiply(P("Z2.Z3.Z5"), gen(5)), P("Z6"));
    ASSERT_EQ(P("X3") * P("Z3"), P("Y3"));
    PauliOperator y = P("Y3");
    ASSERT_EQ(y.x(), Bits{1} << 2);
    ASSERT_EQ(y.z(), Bits{1} << 2);
}

TEST(pauli, register_mismatch) {
    PauliOperator a(7, 1, 0);
    PauliOperator b(10, 1, 0);
    ASSERT_THROW(a * b, std::invalid_argument);
    ASSERT_THROW(commutes(a, b), std::invalid_argument);
}

TEST(pauli, commutes) {
    ASSERT_TRUE(commutes(gen(4), gen(1)));
    ASSERT_FALSE(commutes(P("Z1"), P("X1")));
    ASSERT_FALSE(commutes(P("Z4"), gen(1)));
}

TEST(pauli, parse_and_str) {
    ASSERT_EQ(P("Z2.Z5").str(), "Z2.Z5");
    ASSERT_EQ(P("I").str(), "I");
    ASSERT_EQ(P("X1.Y7").weight(), 2);
    ASSERT_EQ(P("Y7").at(6), 'Y');
    ASSERT_THROW(P("Q1"), std::invalid_argument);
    ASSERT_THROW(P("Z8"), std::invalid_argument);
    ASSERT_THROW(P("Z0"), std::invalid_argument);
}

TEST(pauli, generators_match_checks) {
    ASSERT_EQ(gen(1), P("X1.X2.X3.X4"));
    ASSERT_EQ(gen(2), P("X2.X3.X5.X6"));
    ASSERT_EQ(gen(3), P("X3.X4.X6.X7"));
    ASSERT_EQ(gen(4), P("Z1.Z2.Z3.Z4"));
    ASSERT_EQ(gen(5), P("Z2.Z3.Z5.Z6"));
    ASSERT_EQ(gen(6), P("Z3.Z4.Z6.Z7"));
}

TEST(pauli, group_invariants) {
    const auto& code = steane_code();
    for (const auto& a : code.generators()) {
        for (const auto& b : code.generators()) {
            ASSERT_TRUE(commutes(a, b));
        }
        ASSERT_TRUE(commutes(a, code.logical_x()));
        ASSERT_TRUE(commutes(a, code.logical_z()));
    }
    ASSERT_FALSE(commutes(code.logical_x(), code.logical_z()));
}

TEST(pauli, reduce_examples) {
    Reduction r = reduce_mod_stabilizers(P("Z2.Z3.Z5"));
    ASSERT_FALSE(r.logical());
    ASSERT_EQ(r.min_weight_rep, P("Z6"));

    r = reduce_mod_stabilizers(P("Z2.Z5"));
    ASSERT_EQ(r.cls, ErrorClass::LogicalZ);
    // Z2.Z5 and Z1 times the logical Z lie in the same coset.
    ASSERT_TRUE(steane_code().contains(P("Z2.Z5") * P("Z1") * steane_code().logical_z()));

    r = reduce_mod_stabilizers(P("I"));
    ASSERT_EQ(r.cls, ErrorClass::Identity);
    ASSERT_EQ(r.min_weight_rep, P("I"));
}

TEST(pauli, reduce_rejects_non_data_support) {
    PauliOperator e(10, Bits{1} << 8, 0);
    ASSERT_THROW(reduce_mod_stabilizers(e), std::invalid_argument);
}

TEST(pauli, single_qubit_errors_are_not_logical) {
    for (std::uint32_t q = 0; q < 7; q++) {
        for (char p : {'X', 'Y', 'Z'}) {
            PauliOperator e = PauliOperator::single(7, q, p);
            Reduction r = reduce_mod_stabilizers(e);
            ASSERT_FALSE(r.logical()) << e.str();
            ASSERT_EQ(r.min_weight_rep, e);
        }
    }
}

TEST(pauli, stabilizers_are_not_logical) {
    const auto& g = steane_code().generators();
    for (std::uint32_t m = 0; m < 64; m++) {
        PauliOperator s(7);
        for (int k = 0; k < 6; k++) {
            if ((m >> k) & 1) {
                s = s * g[k];
            }
        }
        ASSERT_FALSE(reduce_mod_stabilizers(s).logical());
        ASSERT_TRUE(steane_code().contains(s));
    }
}

TEST(pauli, reduce_matches_weight_parity_oracle) {
    // Every sum of checks has even weight and the all-ones word is odd, so a
    // pattern is a logical after its lookup correction iff its weight parity
    // disagrees with whether its syndrome is nonzero.
    const auto& code = steane_code();
    auto part_logical = [&](Bits p) { return (std::popcount(p) + (code.syndrome(p) != 0 ? 1 : 0)) % 2 == 1; };
    for (Bits x = 0; x < 128; x++) {
        for (Bits z = 0; z < 128; z++) {
            PauliOperator e(7, x, z);
            ErrorClass want = part_logical(x) ? (part_logical(z) ? ErrorClass::LogicalY : ErrorClass::LogicalX)
                                              : (part_logical(z) ? ErrorClass::LogicalZ : ErrorClass::Stabilizer);
            if (x == 0 && z == 0) {
                want = ErrorClass::Identity;
            }
            ASSERT_EQ(reduce_mod_stabilizers(e).cls, want) << e.str();
        }
    }
}

TEST(pauli, reduce_is_coset_invariant) {
    for (Bits x = 0; x < 128; x += 3) {
        for (Bits z = 0; z < 128; z += 5) {
            PauliOperator e(7, x, z);
            Reduction r = reduce_mod_stabilizers(e);
            for (const auto& s : steane_code().generators()) {
                Reduction rs = reduce_mod_stabilizers(e * s);
                if (e * s != PauliOperator(7)) {
                    ASSERT_EQ(rs.cls == ErrorClass::Identity ? ErrorClass::Stabilizer : rs.cls,
                              r.cls == ErrorClass::Identity ? ErrorClass::Stabilizer : r.cls);
                }
                ASSERT_EQ(rs.min_weight_rep, r.min_weight_rep);
                ASSERT_EQ(rs.css_weight(), r.css_weight());
            }
        }
    }
}

TEST(pauli, commutation_is_symmetric_and_product_commutative) {
    for (Bits a = 0; a < 128 * 128; a += 97) {
        for (Bits b = 0; b < 128 * 128; b += 89) {
            PauliOperator pa(7, a & 127, a >> 7);
            PauliOperator pb(7, b & 127, b >> 7);
            ASSERT_EQ(commutes(pa, pb), commutes(pb, pa));
            ASSERT_EQ(pa * pb, pb * pa);
            ASSERT_EQ((pa * pb) * pa, pb);
        }
    }
}

TEST(pauli, register_names) {
    QubitRegister reg{7, 3, 1};
    ASSERT_EQ(reg.size(), 11u);
    ASSERT_EQ(reg.name(0), "d1");
    ASSERT_EQ(reg.name(7), "a0");
    ASSERT_EQ(reg.name(10), "f0");
    ASSERT_EQ(reg.role(9), QubitRole::Ancilla);
    ASSERT_THROW(reg.role(11), std::out_of_range);
}
