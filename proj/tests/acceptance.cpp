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


// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// line fails. Tolerances are fixed here.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <memory>
#include <iostream>
#include <string>
#include <thread>

#include "steane/steane.hpp"

using namespace steane;

namespace {

constexpr double kDecodeBudgetMs = 1.0;
constexpr std::size_t kMinBaseCircuits = 1000;
constexpr double kSlopeTarget = 2.0;
constexpr double kSlopeTolerance = 0.15;
constexpr double kShotsNumerator = 20000;
constexpr std::uint64_t kMinShots = 100'000;
constexpr std::uint64_t kSeed = 20260417;

std::string data_path(const std::string& rel) { return std::string(STEANE_SE_DATA_DIR) + "/" + rel; }

struct Check {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

void report(const std::string& name, const std::function<Check()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
        c = fn();
    } catch (const std::exception& e) {
        c = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    g_failures += !c.ok;
    std::printf("%s %s: %s (%.2fs)\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string run_cli(const std::string& args) {
    std::string cmd = std::string(STEANE_SE_BIN) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        out.append(buf, n);
    }
    pclose(p);
    return out;
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main() {
    const Circuit primary = load_circuit(data_path("circuits/primary_z.circ"));
    const Circuit recovery = load_circuit(data_path("circuits/recovery_z.circ"));
    const Circuit recovery_x = dualize(recovery);
    const DecoderTables tables = build_remap(primary, recovery_x);
    std::unique_ptr<BfsTable> table;

    report("decode worked example", [&] {
        auto t0 = std::chrono::steady_clock::now();
        Bits s = raw_to_syndrome(tables.primary_map, bits_from_string("011"));
        PauliOperator c = decode_standard(tables, s);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        bool ok = bits_to_string(s, 3) == "101" && c == PauliOperator::parse("X4") && ms < kDecodeBudgetMs;
        return Check{ok, "b=011 -> s=" + bits_to_string(s, 3) + " -> " + c.str() + " in " + std::to_string(ms) + " ms"};
    });

    report("remap table", [&] {
        auto diff = remapped_entries(tables);
        bool ok = diff.size() == 2 && diff.count(bits_from_string("010")) && diff.count(bits_from_string("100")) &&
                  diff.at(bits_from_string("010")) == PauliOperator::parse("Z1.Z2") &&
                  diff.at(bits_from_string("100")) == PauliOperator::parse("Z2.Z5");
        std::string d;
        for (const auto& [s, p] : diff) {
            d += (d.empty() ? "" : ", ") + bits_to_string(s, 3) + " -> " + p.str();
        }
        return Check{ok, d};
    });

    report("rank recovery", [&] {
        std::size_t rh = gf2_rank(steane_parity_checks());
        std::size_t rp = gf2_rank(effective_parity_checks());
        return Check{rh == 3 && rp == 3, "rank(H)=" + std::to_string(rh) + " rank(H')=" + std::to_string(rp)};
    });

    report("BFS minimality", [&] {
        table = std::make_unique<BfsTable>();
        MatrixState h = pack(steane_parity_checks());
        int d = table->distance(h);
        // Exhaustive: no state at distance <= 10 equals H.
        std::size_t shorter = 0;
        for (MatrixState s = 0; s < kNumStates; s++) {
            if (table->distance(s) <= 10 && s == h) {
                shorter++;
            }
        }
        return Check{d == 11 && shorter == 0 && table->visited() == kNumStates,
                     "distance(0 -> H)=" + std::to_string(d) + ", states at distance <= 10 equal to H: " +
                         std::to_string(shorter)};
    });

    report("flag lower bound", [&] {
        if (!table) {
            table = std::make_unique<BfsTable>();
        }
        std::size_t checked = 0;
        std::size_t below_three = 0;
        auto paths = collect_geodesics(*table, steane_parity_checks(), {kMinBaseCircuits, false});
        CounterRng rng(kSeed, 0);
        for (std::size_t i = 0; i < kMinBaseCircuits; i++) {
            paths.push_back(sample_geodesic(*table, steane_parity_checks(), rng));
        }
        for (const auto& p : paths) {
            FlagSearchResult r = min_flag_cnots(extract_circuit(p), 2, false);
            checked++;
            below_three += r.m.has_value();
        }
        CanonicalCircuits cc = derive_canonical(*table);
        FlagSearchResult exact = min_flag_cnots(cc.base, 3, false);
        bool canon = cc.flags.m == 3 && exact.m == 3 && cc.report.all_pass() && cc.primary == primary;
        return Check{checked >= kMinBaseCircuits && below_three == 0 && canon,
                     std::to_string(checked) + " base circuits (enumerated + sampled), " + std::to_string(below_three) +
                         " with m(C) <= 2; canonical m(C)=" + (cc.flags.m ? std::to_string(*cc.flags.m) : "none") +
                         ", witness " + cc.report.summary()};
    });

    report("FT conditions", [&] {
        FtReport z = verify_ft_conditions(primary, recovery_x, tables);
        Circuit px = dualize(primary);
        FtReport x = verify_ft_conditions(px, recovery, build_remap(px, recovery));
        std::size_t cex = z.data_error_failures.size() + z.unflagged_failures.size() + z.flagged_failures.size() +
                          x.data_error_failures.size() + x.unflagged_failures.size() + x.flagged_failures.size();
        return Check{z.all_pass() && x.all_pass() && cex == 0,
                     "Z: " + z.summary() + ", X: " + x.summary() + ", " +
                         std::to_string(z.faults_checked + x.faults_checked) + " faults, " + std::to_string(cex) +
                         " counterexamples"};
    });

    report("negative control", [&] {
        ProtocolSetup setup(primary, recovery);
        ProtocolSetup plain = setup.without_remap();
        const auto& side = plain.side(Basis::Z);
        std::size_t flagged = 0;
        std::size_t failures = 0;
        for (const auto& f : enumerate_faults(side.primary)) {
            FaultPlan plan;
            plan.add_fault(0, side.primary_prog, f);
            ShotRecord r = run_experiment(plain, 1, plan);
            if (r.flags_raised) {
                flagged++;
                failures += r.failed();
            }
        }
        return Check{failures >= 1, std::to_string(failures) + " logical failures among " + std::to_string(flagged) +
                                        " flagged single faults without the remap"};
    });

    report("quadratic suppression", [&] {
        ProtocolSetup setup(primary, recovery);
        ShotRule rule{kShotsNumerator, 1'000'000'000, std::nullopt};
        RunOptions opt{kSeed, worker_threads(), BasisOrder::ZX, 1 << 14};
        const std::vector<double> ps{3e-4, 1e-3, 3e-3};
        SweepResult r = sweep_physical_rate(setup, ps, 2, rule, opt);
        bool enough = true;
        std::string d;
        for (const auto& p : r.points) {
            enough = enough && p.shots >= kMinShots;
            char buf[128];
            std::snprintf(buf, sizeof buf, "p=%g: %llu/%llu, ", p.p_phys, static_cast<unsigned long long>(p.failures),
                          static_cast<unsigned long long>(p.shots));
            d += buf;
        }
        double slope = loglog_slope(r.points);
        char buf[64];
        std::snprintf(buf, sizeof buf, "slope %.3f", slope);
        return Check{enough && std::abs(slope - kSlopeTarget) <= kSlopeTolerance, d + buf};
    });

    report("oracle equivalence", [&] {
        std::size_t total = 0;
        std::size_t agree = 0;
        for (const Circuit* base : {&primary, &recovery}) {
            for (bool x : {false, true}) {
                Circuit c = x ? dualize(*base) : *base;
                Program prog(c);
                for (const auto& f : enumerate_faults(c)) {
                    FaultEffect e = propagate(c, f);
                    RunResult r = run_deterministic_fault(prog, f, PauliOperator(7));
                    total++;
                    agree += r.bits == e.bit_flips && r.flags == e.flag_flips &&
                             r.data_frame(c.reg) == e.residual_data;
                }
            }
        }
        return Check{total > 0 && agree == total, std::to_string(agree) + "/" + std::to_string(total) + " locations"};
    });

    report("reproducibility", [&] {
        ProtocolSetup setup(primary, recovery);
        ShotRule rule{0, 1, 50'000};
        std::string a = to_csv(sweep_physical_rate(setup, {1e-3, 1e-2}, 2, rule, {kSeed, 1, BasisOrder::ZX, 1 << 14}));
        std::string b = to_csv(
            sweep_physical_rate(setup, {1e-3, 1e-2}, 2, rule, {kSeed, worker_threads() + 3, BasisOrder::ZX, 1 << 14}));
        std::string args = "sweep-p --p 1e-3,1e-2 --shots 50000 --seed " + std::to_string(kSeed) + " --threads ";
        std::string c1 = run_cli(args + "1");
        std::string c8 = run_cli(args + "8");
        bool ok = a == b && !c1.empty() && c1 == c8 && c1 == a;
        return Check{ok, std::string("library ") + (a == b ? "identical" : "DIFFERENT") + ", CLI " +
                             (c1 == c8 && !c1.empty() ? "identical" : "DIFFERENT") + ", library vs CLI " +
                             (c1 == a ? "identical" : "DIFFERENT")};
    });

    std::printf("%d failing\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
