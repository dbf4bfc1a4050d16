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

#include <sstream>
#include <string>
#include <vector>

#include "steane/circuit.hpp"
#include "steane/decoder.hpp"
#include "steane/fault_enum.hpp"

namespace steane {

/// Outcome of the exhaustive single-fault check of one primary/recovery pair.
///
///   (i)    a single data error before a fault-free primary run is corrected;
///   (ii)a  one internal fault that leaves the flag down leaves at most a
///          weight-one error (per Pauli type, up to stabilizers) after the
///          standard correction;
///   (ii)b  one internal fault that raises the flag is fully fixed by a
///          noiseless recovery run decoded with the remap table: the recovery
///          type is cleared and the rest is at most weight one.
struct FtReport {
    Basis primary_basis = Basis::Z;
    bool data_errors_corrected = true;  // (i)
    bool unflagged_faults_benign = true;  // (ii)a
    bool flagged_faults_recovered = true;  // (ii)b
    std::size_t data_errors_checked = 0;
    std::size_t faults_checked = 0;
    std::size_t flagged_faults = 0;
    std::vector<std::string> data_error_failures;
    std::vector<std::string> unflagged_failures;
    std::vector<std::string> flagged_failures;

    bool all_pass() const { return data_errors_corrected && unflagged_faults_benign && flagged_faults_recovered; }

    std::string summary() const {
        auto word = [](bool ok) { return ok ? "PASS" : "FAIL"; };
        std::ostringstream out;
        out << "(i) " << word(data_errors_corrected) << " (ii)(a) " << word(unflagged_faults_benign) << " (ii)(b) "
            << word(flagged_faults_recovered);
        return out.str();
    }
};

inline PauliOperator apply_correction(const PauliOperator& residual, const PauliOperator& correction) {
    return residual * correction;
}

inline FtReport verify_ft_conditions(const Circuit& primary, const Circuit& recovery, const DecoderTables& tables) {
    FtReport report;
    report.primary_basis = primary.basis;
    const StabilizerGroup& code = steane_code();
    auto detected_by = [](Basis measured, const PauliOperator& p) {
        return measured == Basis::Z ? p.x() : p.z();
    };
    auto flagged_branch = [&](const PauliOperator& residual) {
        Bits s = raw_to_syndrome(tables.recovery_map, noiseless_bits(recovery, residual));
        return apply_correction(residual, decode_remap(tables, s));
    };
    auto unflagged_branch = [&](const FaultEffect& e) {
        Bits s = raw_to_syndrome(tables.primary_map, e.bit_flips);
        return apply_correction(e.residual_data, decode_standard(tables, s));
    };
    auto flagged_ok = [&](const PauliOperator& after) {
        return code.coset_weight(detected_by(recovery.basis, after)) == 0 &&
               code.coset_weight(detected_by(primary.basis, after)) <= 1;
    };

    // (i)
    for (std::uint32_t q = 0; q < 7; q++) {
        for (char p : {'X', 'Y', 'Z'}) {
            PauliOperator err = PauliOperator::single(7, q, p);
            FaultEffect e = propagate_input(primary, PauliOperator(primary.reg.size(), err.x(), err.z()));
            report.data_errors_checked++;
            bool ok;
            if (e.flag_flip()) {
                ok = flagged_ok(flagged_branch(e.residual_data));
            } else {
                PauliOperator after = unflagged_branch(e);
                ok = code.coset_weight(detected_by(primary.basis, after)) == 0 &&
                     !reduce_mod_stabilizers(after).logical();
            }
            if (!ok) {
                report.data_errors_corrected = false;
                report.data_error_failures.push_back("input " + err.str());
            }
        }
    }

    // (ii)
    for (const auto& f : enumerate_faults(primary)) {
        FaultEffect e = propagate(primary, f);
        report.faults_checked++;
        if (!e.flag_flip()) {
            PauliOperator after = unflagged_branch(e);
            if (reduce_mod_stabilizers(after).css_weight() > 1) {
                report.unflagged_faults_benign = false;
                report.unflagged_failures.push_back(f.str(primary.reg) + " leaves " + after.str());
            }
        } else {
            report.flagged_faults++;
            PauliOperator after = flagged_branch(e.residual_data);
            if (!flagged_ok(after)) {
                report.flagged_faults_recovered = false;
                report.flagged_failures.push_back(f.str(primary.reg) + " leaves " + after.str() + " (" +
                                                  to_string(reduce_mod_stabilizers(after).cls) + ")");
            }
        }
    }
    return report;
}

}  // namespace steane
