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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steane/circuit.hpp"
#include "steane/decoder.hpp"
#include "steane/noise_sim.hpp"

namespace steane {

/// Circuits, compiled programs and decoder tables for both extraction bases.
class ProtocolSetup {
   public:
    struct Side {
        Circuit primary;
        Circuit recovery;
        Program primary_prog;
        Program recovery_prog;
        DecoderTables tables;
    };

    /// Both circuits in the Z basis. A Z-basis cycle falls back to the dual
    /// of the recovery circuit; the X-basis pair is the dual of everything.
    ProtocolSetup(const Circuit& primary_z, const Circuit& recovery_z)
        : z_(make(primary_z, dualize(recovery_z))), x_(make(dualize(primary_z), recovery_z)) {}

    /// Explicit tables, e.g. to disable the remap.
    ProtocolSetup(const Circuit& primary_z, const Circuit& recovery_z, const DecoderTables& z_tables,
                  const DecoderTables& x_tables)
        : ProtocolSetup(primary_z, recovery_z) {
        z_.tables = z_tables;
        x_.tables = x_tables;
    }

    const Side& side(Basis b) const { return b == Basis::Z ? z_ : x_; }

    /// Copy whose remap tables equal the plain lookup.
    ProtocolSetup without_remap() const {
        ProtocolSetup out = *this;
        for (Side* s : {&out.z_, &out.x_}) {
            s->tables = standard_tables(s->primary, s->recovery);
        }
        return out;
    }

   private:
    static Side make(Circuit primary, Circuit recovery) {
        if (primary.basis != dual(recovery.basis)) {
            throw std::invalid_argument("primary and recovery circuits must use dual bases");
        }
        DecoderTables t = build_remap(primary, recovery);
        Program pp(primary);
        Program rp(recovery);
        return Side{std::move(primary), std::move(recovery), std::move(pp), std::move(rp), std::move(t)};
    }

    Side z_;
    Side x_;
};

/// Sampled circuit-level noise; one event list per circuit execution.
class RandomNoise {
   public:
    RandomNoise(NoiseParams params, CounterRng& rng) : params_(params), rng_(rng) {}
    std::vector<NoiseEvent> events(const Program& prog) {
        runs_++;
        return sample_events(prog, params_, rng_);
    }
    std::size_t runs() const { return runs_; }

   private:
    NoiseParams params_;
    CounterRng& rng_;
    std::size_t runs_ = 0;
};

/// Fixed events keyed by execution index within the shot (0 = first circuit run).
class FaultPlan {
   public:
    FaultPlan() = default;
    void add(std::size_t run_index, NoiseEvent e) { plan_[run_index].push_back(e); }
    void add_fault(std::size_t run_index, const Program& prog, const FaultLocation& f) {
        for (const auto& e : events_for_fault(prog, f)) {
            add(run_index, e);
        }
    }
    std::vector<NoiseEvent> events(const Program&) {
        auto it = plan_.find(runs_++);
        if (it == plan_.end()) {
            return {};
        }
        auto ev = it->second;
        std::sort(ev.begin(), ev.end(), [](const NoiseEvent& a, const NoiseEvent& b) { return a.site < b.site; });
        return ev;
    }
    std::size_t runs() const { return runs_; }

   private:
    std::map<std::size_t, std::vector<NoiseEvent>> plan_;
    std::size_t runs_ = 0;
};

enum class Branch : std::uint8_t { Standard, Recovery };

struct CycleOutcome {
    Basis basis = Basis::Z;
    bool flag_raised = false;
    Branch branch = Branch::Standard;
    PauliOperator applied_correction{7};
    Bits bits = 0;  ///< primary bits if unflagged, recovery bits if flagged
};

namespace detail {

template <typename Source>
RunResult execute(const Program& prog, const PauliOperator& frame, Source& noise) {
    std::vector<NoiseEvent> ev = noise.events(prog);
    if (ev.empty() && frame.is_identity()) {
        return {};
    }
    return run(prog, frame.x(), frame.z(), ev);
}

}  // namespace detail

/// One extraction cycle. Returns the outcome; `frame` is updated in place.
template <typename Source>
CycleOutcome run_cycle(const ProtocolSetup& setup, Basis basis, PauliOperator& frame, Source& noise) {
    const auto& side = setup.side(basis);
    const QubitRegister& reg = side.primary.reg;
    CycleOutcome out;
    out.basis = basis;
    RunResult first = detail::execute(side.primary_prog, frame, noise);
    frame = first.data_frame(reg);
    if (!first.flag_raised()) {
        out.bits = first.bits;
        out.applied_correction = decode_standard(side.tables, raw_to_syndrome(side.tables.primary_map, first.bits));
    } else {
        out.flag_raised = true;
        out.branch = Branch::Recovery;
        RunResult second = detail::execute(side.recovery_prog, frame, noise);
        frame = second.data_frame(side.recovery.reg);
        out.bits = second.bits;
        out.applied_correction = decode_remap(side.tables, raw_to_syndrome(side.tables.recovery_map, second.bits));
    }
    frame = frame * out.applied_correction;
    return out;
}

enum class BasisOrder : std::uint8_t { ZX, XZ };

inline Basis cycle_basis(BasisOrder order, std::size_t cycle) {
    Basis first = order == BasisOrder::ZX ? Basis::Z : Basis::X;
    return cycle % 2 == 0 ? first : dual(first);
}

inline const char* to_string(BasisOrder o) { return o == BasisOrder::ZX ? "ZX" : "XZ"; }

inline BasisOrder parse_basis_order(const std::string& s) {
    if (s == "ZX" || s == "zx") {
        return BasisOrder::ZX;
    }
    if (s == "XZ" || s == "xz") {
        return BasisOrder::XZ;
    }
    throw std::invalid_argument("basis order must be ZX or XZ, got '" + s + "'");
}

struct ShotRecord {
    std::size_t flags_raised = 0;
    PauliOperator residual{7};  ///< after the perfect final extraction
    ErrorClass cls = ErrorClass::Identity;
    std::vector<CycleOutcome> cycles;  ///< filled only when tracing

    bool failed() const { return is_logical(cls); }
    bool fail_z() const { return cls == ErrorClass::LogicalZ || cls == ErrorClass::LogicalY; }
    bool fail_x() const { return cls == ErrorClass::LogicalX || cls == ErrorClass::LogicalY; }
};

/// Residual after a perfect extraction in both bases and standard lookup correction.
inline PauliOperator after_ideal_extraction(const PauliOperator& frame) {
    const StabilizerGroup& code = steane_code();
    Bits x = frame.x() ^ code.lookup(code.syndrome(frame.x()));
    Bits z = frame.z() ^ code.lookup(code.syndrome(frame.z()));
    return PauliOperator(7, x, z);
}

/// Memory experiment from the code space: n_cycles alternating extractions,
/// then a perfect final extraction and classification of what is left.
template <typename Source>
ShotRecord run_experiment(const ProtocolSetup& setup, std::size_t n_cycles, Source& noise,
                          BasisOrder order = BasisOrder::ZX, bool trace = false) {
    if (n_cycles == 0) {
        throw std::invalid_argument("n_cycles must be at least 1");
    }
    ShotRecord rec;
    PauliOperator frame(7);
    for (std::size_t i = 0; i < n_cycles; i++) {
        CycleOutcome o = run_cycle(setup, cycle_basis(order, i), frame, noise);
        rec.flags_raised += o.flag_raised;
        if (trace) {
            rec.cycles.push_back(o);
        }
    }
    rec.residual = after_ideal_extraction(frame);
    rec.cls = rec.residual.is_identity() ? ErrorClass::Identity : reduce_mod_stabilizers(rec.residual).cls;
    return rec;
}

}  // namespace steane
