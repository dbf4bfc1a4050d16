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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "steane/protocol.hpp"

namespace steane {

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t shots,
                                                 double confidence = 0.95) {
    if (shots == 0) {
        throw std::invalid_argument("wilson_interval needs at least one shot");
    }
    if (failures > shots) {
        throw std::invalid_argument("failures exceed shots");
    }
    if (!(confidence > 0 && confidence < 1)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
    const double n = static_cast<double>(shots);
    const double p = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    double lo = failures == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = failures == shots ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

/// Shots per point: `fixed` if set, otherwise ceil(numerator / p) capped at `cap`.
struct ShotRule {
    double numerator = 20000;
    std::uint64_t cap = 1'000'000;
    std::optional<std::uint64_t> fixed;

    std::uint64_t shots_for(double p) const {
        if (fixed) {
            return *fixed;
        }
        if (p <= 0) {
            return cap;
        }
        double n = std::ceil(numerator / p);
        return n >= static_cast<double>(cap) ? cap : static_cast<std::uint64_t>(n);
    }
};

struct SweepPoint {
    double p_phys = 0;
    NoiseParams noise;
    std::uint64_t n_cycles = 1;
    std::uint64_t shots = 0;
    std::uint64_t failures = 0;
    std::uint64_t fail_z = 0;
    std::uint64_t fail_x = 0;
    std::uint64_t flags = 0;  ///< cycles in which a flag was raised
    double p_l = 0;
    double wilson_lo = 0;
    double wilson_hi = 0;
    std::uint64_t seed = 0;
    std::string convention;

    double per_p2() const { return p_phys > 0 ? p_l / (p_phys * p_phys) : 0.0; }
    double per_cycle() const { return p_l / static_cast<double>(n_cycles); }
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

struct RunOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    BasisOrder order = BasisOrder::ZX;
    std::uint64_t chunk = 1 << 14;  ///< shots per work item
};

inline std::string convention_tag(BasisOrder order) {
    return std::string("per-extraction-cycle;order=") + to_string(order) + ";final=ideal";
}

/// Seed of point `index` within a sweep.
inline std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(0xA5A5A5A5ULL + index));
}

namespace detail {

struct Tally {
    std::uint64_t failures = 0;
    std::uint64_t fail_z = 0;
    std::uint64_t fail_x = 0;
    std::uint64_t flags = 0;

    void add(const Tally& o) {
        failures += o.failures;
        fail_z += o.fail_z;
        fail_x += o.fail_x;
        flags += o.flags;
    }
};

inline Tally run_shots(const ProtocolSetup& setup, const NoiseParams& noise, std::uint64_t n_cycles,
                       std::uint64_t seed, BasisOrder order, std::uint64_t begin, std::uint64_t end) {
    Tally t;
    for (std::uint64_t shot = begin; shot < end; shot++) {
        CounterRng rng(seed, shot);
        RandomNoise source(noise, rng);
        ShotRecord r = run_experiment(setup, n_cycles, source, order);
        t.failures += r.failed();
        t.fail_z += r.fail_z();
        t.fail_x += r.fail_x();
        t.flags += r.flags_raised;
    }
    return t;
}

}  // namespace detail

/// Runs `shots` experiments. Shot k always draws from CounterRng(seed, k), and
/// tallies are sums, so the result does not depend on the thread count.
inline SweepPoint run_point(const ProtocolSetup& setup, double p_phys, const NoiseParams& noise,
                            std::uint64_t n_cycles, std::uint64_t shots, std::uint64_t seed,
                            const RunOptions& opt) {
    noise.validate();
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk);
    const std::uint64_t n_chunks = (shots + chunk - 1) / chunk;
    std::vector<detail::Tally> tallies(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            std::uint64_t b = c * chunk;
            tallies[c] = detail::run_shots(setup, noise, n_cycles, seed, opt.order, b, std::min(shots, b + chunk));
        }
    };
    unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n_chunks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; i++) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    detail::Tally total;
    for (const auto& t : tallies) {
        total.add(t);
    }
    SweepPoint pt;
    pt.p_phys = p_phys;
    pt.noise = noise;
    pt.n_cycles = n_cycles;
    pt.shots = shots;
    pt.failures = total.failures;
    pt.fail_z = total.fail_z;
    pt.fail_x = total.fail_x;
    pt.flags = total.flags;
    pt.p_l = static_cast<double>(total.failures) / static_cast<double>(shots);
    std::tie(pt.wilson_lo, pt.wilson_hi) = wilson_interval(total.failures, shots);
    pt.seed = seed;
    pt.convention = convention_tag(opt.order);
    return pt;
}

/// p_L versus p_phys with p2 = p_spam = p, p_mem = p / 10.
inline SweepResult sweep_physical_rate(const ProtocolSetup& setup, const std::vector<double>& p_list,
                                       std::uint64_t n_cycles, const ShotRule& rule, const RunOptions& opt) {
    if (p_list.empty()) {
        throw std::invalid_argument("p_list must not be empty");
    }
    SweepResult out;
    for (std::size_t i = 0; i < p_list.size(); i++) {
        double p = p_list[i];
        if (!(p >= 0 && p < 0.5)) {
            throw std::invalid_argument("p_phys must lie in [0, 0.5)");
        }
        out.points.push_back(run_point(setup, p, NoiseParams::from_p_phys(p), n_cycles, rule.shots_for(p),
                                       point_seed(opt.seed, i), opt));
    }
    return out;
}

/// p_L versus cycle count at fixed noise.
inline SweepResult sweep_cycles(const ProtocolSetup& setup, const std::vector<std::uint64_t>& n_list,
                                const NoiseParams& noise, std::uint64_t shots, const RunOptions& opt) {
    if (n_list.empty()) {
        throw std::invalid_argument("n_list must not be empty");
    }
    for (std::size_t i = 0; i < n_list.size(); i++) {
        if (n_list[i] == 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw std::invalid_argument("cycle counts must be positive and strictly ascending");
        }
    }
    SweepResult out;
    for (std::size_t i = 0; i < n_list.size(); i++) {
        out.points.push_back(run_point(setup, noise.p2, noise, n_list[i], shots, point_seed(opt.seed, i), opt));
    }
    return out;
}

inline constexpr const char* kCsvHeader =
    "p_phys,n_cycles,shots,failures,fail_z,fail_x,p_l,wilson_lo,wilson_hi,seed,convention";

inline std::string to_csv(const SweepResult& r) {
    std::string out = std::string(kCsvHeader) + "\n";
    char buf[512];
    for (const auto& p : r.points) {
        std::snprintf(buf, sizeof buf, "%.10g,%llu,%llu,%llu,%llu,%llu,%.10g,%.10g,%.10g,%llu,%s\n", p.p_phys,
                      static_cast<unsigned long long>(p.n_cycles), static_cast<unsigned long long>(p.shots),
                      static_cast<unsigned long long>(p.failures), static_cast<unsigned long long>(p.fail_z),
                      static_cast<unsigned long long>(p.fail_x), p.p_l, p.wilson_lo, p.wilson_hi,
                      static_cast<unsigned long long>(p.seed), p.convention.c_str());
        out += buf;
    }
    return out;
}

/// Least-squares slope of log(p_l) against log(p_phys); points with zero
/// failures are rejected.
inline double loglog_slope(const std::vector<SweepPoint>& pts) {
    if (pts.size() < 2) {
        throw std::invalid_argument("slope needs at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        if (p.failures == 0 || p.p_phys <= 0) {
            throw std::invalid_argument("slope needs nonzero failures and p_phys at every point");
        }
        double x = std::log(p.p_phys);
        double y = std::log(p.p_l);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace steane
