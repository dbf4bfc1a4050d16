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
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "steane/circuit.hpp"
#include "steane/fault_enum.hpp"

namespace steane {

struct NoiseParams {
    double p2 = 0;      ///< per CNOT, one of the 15 nontrivial two-qubit Paulis
    double p_spam = 0;  ///< per measurement, outcome flip
    double p_mem = 0;   ///< per idle qubit per layer, Z

    static NoiseParams from_p_phys(double p) { return {p, p, 0.1 * p}; }
    static NoiseParams none() { return {}; }

    void validate() const {
        for (double v : {p2, p_spam, p_mem}) {
            if (!(v >= 0 && v <= 1)) {
                throw std::invalid_argument("noise probabilities must lie in [0, 1]");
            }
        }
    }

    bool is_zero() const { return p2 == 0 && p_spam == 0 && p_mem == 0; }
    bool operator==(const NoiseParams&) const = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stateless generator: draw k of shot s under seed is a fixed function of
/// (seed, s, k), so shots can run in any order on any thread.
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed) ^ splitmix64(~stream * 0xD1B54A32D192ED03ULL)) {}

    std::uint64_t next() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    /// Uniform in (0, 1].
    double uniform_open0() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>((next() >> 32) * n >> 32); }

    std::uint64_t counter() const { return counter_; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

enum class NoiseClass : std::uint8_t { Gate, Measure, Idle, None };

/// A circuit flattened into program order. Every fault location of
/// enumerate_faults maps to one site; sites carry the noise class that can
/// fire there (BeforeMeasure and AfterReset sites exist only for injected
/// faults).
class Program {
   public:
    struct Site {
        SiteKind kind;
        NoiseClass cls;
        std::uint32_t layer;
        std::uint32_t instr;
        std::uint32_t q0;
        std::uint32_t q1;
        std::uint32_t op;  ///< index into instrs(); unused for Idle
    };
    struct Step {
        bool is_site;
        std::uint32_t index;  ///< into instrs or sites
    };

    explicit Program(const Circuit& c) : reg_(c.reg) {
        std::vector<Bits> idle = idle_masks(c);
        for (std::size_t li = 0; li < c.layers.size(); li++) {
            const auto& layer = c.layers[li];
            for (std::size_t k = 0; k < layer.size(); k++) {
                const Instruction& ins = layer[k];
                const auto op = static_cast<std::uint32_t>(instrs_.size());
                auto site = [&](SiteKind kind, NoiseClass cls) {
                    add_site({kind, cls, static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(k), ins.q0, ins.q1, op});
                };
                if (ins.is_measure()) {
                    site(SiteKind::BeforeMeasure, NoiseClass::None);
                }
                steps_.push_back({false, op});
                instrs_.push_back(ins);
                if (ins.is_cnot()) {
                    site(SiteKind::AfterGate, NoiseClass::Gate);
                } else if (ins.is_reset()) {
                    site(SiteKind::AfterReset, NoiseClass::None);
                } else {
                    site(SiteKind::MeasureFlip, NoiseClass::Measure);
                }
            }
            for (std::uint32_t q = 0; q < reg_.size(); q++) {
                if ((idle[li] >> q) & 1) {
                    add_site({SiteKind::Idle, NoiseClass::Idle, static_cast<std::uint32_t>(li), 0, q, 0, 0});
                }
            }
        }
    }

    const QubitRegister& reg() const { return reg_; }
    const std::vector<Instruction>& instrs() const { return instrs_; }
    const std::vector<Step>& steps() const { return steps_; }
    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<std::uint32_t>& sites_of(NoiseClass cls) const { return by_class_[static_cast<int>(cls)]; }

    /// Site index of a fault location; throws std::out_of_range if absent.
    std::uint32_t site_of(const FaultLocation& f) const {
        for (std::uint32_t i = 0; i < sites_.size(); i++) {
            const Site& s = sites_[i];
            if (s.kind != f.kind || s.layer != f.layer) {
                continue;
            }
            if (f.kind == SiteKind::Idle ? s.q0 == f.qubit : s.instr == f.instr) {
                return i;
            }
        }
        throw std::out_of_range("fault location has no site in this circuit");
    }

   private:
    void add_site(Site s) {
        std::uint32_t idx = static_cast<std::uint32_t>(sites_.size());
        steps_.push_back({true, idx});
        sites_.push_back(s);
        by_class_[static_cast<int>(s.cls)].push_back(idx);
    }

    QubitRegister reg_;
    std::vector<Instruction> instrs_;
    std::vector<Step> steps_;
    std::vector<Site> sites_;
    std::vector<std::uint32_t> by_class_[4];
};

/// One injected error. For MeasureFlip sites x and z are ignored.
struct NoiseEvent {
    std::uint32_t site = 0;
    Bits x = 0;
    Bits z = 0;

    bool operator==(const NoiseEvent&) const = default;
};

struct RunResult {
    Bits bits = 0;   ///< bit k = syndrome slot b_k
    Bits flags = 0;  ///< bit k = flag slot k
    Bits x = 0;      ///< frame over the full register
    Bits z = 0;

    bool flag_raised() const { return flags != 0; }
    PauliOperator data_frame(const QubitRegister& reg) const {
        return PauliOperator(reg.n_data, x & reg.data_mask(), z & reg.data_mask());
    }
    bool operator==(const RunResult&) const = default;
};

/// Frame simulation with a fixed list of events sorted by site.
inline RunResult run(const Program& prog, Bits x_in, Bits z_in, const std::vector<NoiseEvent>& events) {
    RunResult r{0, 0, x_in, z_in};
    std::size_t ev = 0;
    for (const auto& step : prog.steps()) {
        if (step.is_site) {
            while (ev < events.size() && events[ev].site == step.index) {
                const auto& e = events[ev++];
                const auto& site = prog.sites()[step.index];
                if (site.kind == SiteKind::MeasureFlip) {
                    const Instruction& m = prog.instrs()[site.op];
                    (m.slot.kind == OutputSlot::Kind::Syndrome ? r.bits : r.flags) ^= Bits{1} << m.slot.index;
                } else {
                    r.x ^= e.x;
                    r.z ^= e.z;
                }
            }
            continue;
        }
        const Instruction& ins = prog.instrs()[step.index];
        Bits q = Bits{1} << ins.q0;
        switch (ins.kind) {
            case OpKind::CNOT: {
                Bits t = Bits{1} << ins.q1;
                if (r.x & q) {
                    r.x ^= t;
                }
                if (r.z & t) {
                    r.z ^= q;
                }
                break;
            }
            case OpKind::ResetZ:
            case OpKind::ResetX:
                r.x &= ~q;
                r.z &= ~q;
                break;
            case OpKind::MeasureZ:
            case OpKind::MeasureX:
                if (ins.kind == OpKind::MeasureZ ? (r.x & q) : (r.z & q)) {
                    (ins.slot.kind == OutputSlot::Kind::Syndrome ? r.bits : r.flags) ^= Bits{1} << ins.slot.index;
                }
                break;
        }
    }
    if (ev != events.size()) {
        throw std::invalid_argument("noise events must be sorted by site and refer to existing sites");
    }
    return r;
}

namespace detail {

/// Geometric skip: index gaps between successive hits of a Bernoulli(p) stream.
template <typename Fn>
void for_each_hit(CounterRng& rng, double p, std::size_t n, Fn&& fn) {
    if (p <= 0 || n == 0) {
        return;
    }
    if (p >= 1) {
        for (std::size_t i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    const double log_q = std::log1p(-p);
    std::size_t i = 0;
    while (true) {
        double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
        if (skip >= static_cast<double>(n - i)) {
            return;
        }
        i += static_cast<std::size_t>(skip);
        fn(i);
        i++;
        if (i >= n) {
            return;
        }
    }
}

}  // namespace detail

/// Draws the events of one noisy run of `prog`. Classes are sampled in the
/// order gate, measure, idle; CNOT Paulis are uniform over the 15 nontrivial
/// ones in control-major I, X, Y, Z order.
inline std::vector<NoiseEvent> sample_events(const Program& prog, const NoiseParams& noise, CounterRng& rng) {
    std::vector<NoiseEvent> events;
    const auto& sites = prog.sites();
    detail::for_each_hit(rng, noise.p2, prog.sites_of(NoiseClass::Gate).size(), [&](std::size_t i) {
        std::uint32_t idx = prog.sites_of(NoiseClass::Gate)[i];
        std::uint32_t r = 1 + rng.below(15);
        std::uint32_t pc = r >> 2;
        std::uint32_t pt = r & 3;
        Bits c = Bits{1} << sites[idx].q0;
        Bits t = Bits{1} << sites[idx].q1;
        NoiseEvent e{idx, 0, 0};
        // I=0, X=1, Y=2, Z=3
        if (pc == 1 || pc == 2) e.x |= c;
        if (pc == 2 || pc == 3) e.z |= c;
        if (pt == 1 || pt == 2) e.x |= t;
        if (pt == 2 || pt == 3) e.z |= t;
        events.push_back(e);
    });
    detail::for_each_hit(rng, noise.p_spam, prog.sites_of(NoiseClass::Measure).size(), [&](std::size_t i) {
        events.push_back({prog.sites_of(NoiseClass::Measure)[i], 0, 0});
    });
    detail::for_each_hit(rng, noise.p_mem, prog.sites_of(NoiseClass::Idle).size(), [&](std::size_t i) {
        std::uint32_t idx = prog.sites_of(NoiseClass::Idle)[i];
        events.push_back({idx, 0, Bits{1} << sites[idx].q0});
    });
    std::sort(events.begin(), events.end(), [](const NoiseEvent& a, const NoiseEvent& b) { return a.site < b.site; });
    return events;
}

/// One noisy execution. `frame_in` lives on the data qubits.
inline RunResult run_noisy(const Program& prog, const PauliOperator& frame_in, const NoiseParams& noise,
                           CounterRng& rng) {
    Bits dm = prog.reg().data_mask();
    if ((frame_in.x() | frame_in.z()) & ~dm) {
        throw std::invalid_argument("input frame must be supported on data qubits");
    }
    return run(prog, frame_in.x(), frame_in.z(), sample_events(prog, noise, rng));
}

inline std::vector<NoiseEvent> events_for_fault(const Program& prog, const FaultLocation& f) {
    if (f.pauli.num_qubits() != prog.reg().size()) {
        throw std::invalid_argument("fault Pauli must span the circuit register");
    }
    return {{prog.site_of(f), f.pauli.x(), f.pauli.z()}};
}

/// Noiseless run with exactly the single fault `f` injected.
inline RunResult run_deterministic_fault(const Program& prog, const FaultLocation& f, const PauliOperator& frame_in) {
    return run(prog, frame_in.x(), frame_in.z(), events_for_fault(prog, f));
}

}  // namespace steane
