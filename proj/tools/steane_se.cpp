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

// steane_se: command-line front end for the Steane flag-and-fallback toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steane/steane.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace steane;

namespace {

constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Options shared by every subcommand plus the optional JSON config.
struct Globals {
    std::string data_dir = STEANE_SE_DATA_DIR;
    std::string config_path;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    json config = json::object();
    CLI::Option* seed_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

const std::map<std::string, json::value_t> kConfigKeys = {
    {"seed", json::value_t::number_unsigned}, {"threads", json::value_t::number_unsigned},
    {"basis_order", json::value_t::string},   {"n_cycles", json::value_t::number_unsigned},
    {"noise", json::value_t::object},         {"p_list", json::value_t::array},
    {"n_list", json::value_t::array},         {"shots", json::value_t::number_unsigned},
    {"shots_numerator", json::value_t::number_float}, {"max_shots", json::value_t::number_unsigned},
    {"out", json::value_t::string},           {"primary", json::value_t::string},
    {"recovery", json::value_t::string},
};

bool type_matches(const json& v, json::value_t want) {
    switch (want) {
        case json::value_t::number_unsigned:
            return v.is_number_unsigned();
        case json::value_t::number_float:
            return v.is_number();
        default:
            return v.type() == want;
    }
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [k, v] : j.items()) {
        auto it = kConfigKeys.find(k);
        if (it == kConfigKeys.end()) {
            throw ConfigError("unknown config key '" + k + "'");
        }
        if (!type_matches(v, it->second)) {
            throw ConfigError("config key '" + k + "' has the wrong type");
        }
    }
    if (j.contains("noise")) {
        for (const auto& [k, v] : j["noise"].items()) {
            if ((k != "p_phys" && k != "p2" && k != "p_spam" && k != "p_mem") || !v.is_number()) {
                throw ConfigError("bad noise entry '" + k + "'");
            }
        }
    }
    return j;
}

/// Copies a config value into `var` unless the flag was given on the command line.
template <typename T>
void from_config(const json& cfg, const char* key, CLI::Option* opt, T& var) {
    if (opt->count() > 0 || !cfg.contains(key)) {
        return;
    }
    try {
        var = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

template <typename T>
void noise_from_config(const json& cfg, const char* key, CLI::Option* opt, T& var) {
    if (opt->count() > 0 || !cfg.contains("noise") || !cfg["noise"].contains(key)) {
        return;
    }
    var = cfg["noise"][key].get<T>();
}

std::uint64_t resolve_seed(Globals& g) {
    if (g.seed_opt->count() == 0 && !g.config.contains("seed")) {
        g.seed = std::random_device{}() * 0x100000001ULL ^ std::random_device{}();
        std::cerr << "seed: " << g.seed << "\n";
    }
    return g.seed;
}

unsigned resolve_threads(const Globals& g) {
    if (g.threads > 0) {
        return g.threads;
    }
    if (const char* env = std::getenv("STEANE_SE_THREADS")) {
        try {
            unsigned long v = std::stoul(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("STEANE_SE_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct CircuitPaths {
    std::string primary;
    std::string recovery;
    CLI::Option* primary_opt = nullptr;
    CLI::Option* recovery_opt = nullptr;

    void add_to(CLI::App* cmd) {
        primary_opt = cmd->add_option("--primary", primary, "Z-basis primary circuit file");
        recovery_opt = cmd->add_option("--recovery", recovery, "Z-basis recovery circuit file");
    }

    std::pair<Circuit, Circuit> load(const Globals& g) {
        from_config(g.config, "primary", primary_opt, primary);
        from_config(g.config, "recovery", recovery_opt, recovery);
        std::string p = primary.empty() ? g.data_dir + "/circuits/primary_z.circ" : primary;
        std::string r = recovery.empty() ? g.data_dir + "/circuits/recovery_z.circ" : recovery;
        Circuit pc, rc;
        try {
            pc = load_circuit(p);
            rc = load_circuit(r);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        if (pc.basis != Basis::Z || rc.basis != Basis::Z) {
            throw ConfigError("circuit files must describe Z-basis circuits; the X side is derived by duality");
        }
        return {pc, rc};
    }
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

void emit_csv(const SweepResult& r, const std::string& out_path, const json& meta) {
    std::string csv = to_csv(r);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
        return;
    }
    write_file(out_path, csv);
    write_file(out_path + ".meta.json", meta.dump(2) + "\n");
    std::cerr << "wrote " << out_path << " and " << out_path << ".meta.json\n";
}

json noise_json(const NoiseParams& n) { return {{"p2", n.p2}, {"p_spam", n.p_spam}, {"p_mem", n.p_mem}}; }

std::string describe(const PauliOperator& p) {
    if (p.is_identity()) {
        return "no correction";
    }
    std::string qubits;
    std::uint32_t count = 0;
    for (std::uint32_t q = 0; q < p.num_qubits(); q++) {
        if ((p.support() >> q) & 1) {
            qubits += (count ? " & " : "") + std::to_string(q + 1);
            count++;
        }
    }
    return (count == 1 ? "correct qubit " : "correct qubits ") + qubits;
}

/// Noise flags: --p sets p2 = p_spam = p and p_mem = p / 10; explicit components override it.
struct NoiseOptions {
    double p_phys = -1;
    double p2 = -1;
    double p_spam = -1;
    double p_mem = -1;
    CLI::Option* o_phys = nullptr;
    CLI::Option* o_p2 = nullptr;
    CLI::Option* o_spam = nullptr;
    CLI::Option* o_mem = nullptr;

    void add_to(CLI::App* cmd) {
        o_phys = cmd->add_option("--p", p_phys, "physical rate: p2 = p_spam = p, p_mem = p/10");
        o_p2 = cmd->add_option("--p2", p2, "two-qubit depolarizing probability");
        o_spam = cmd->add_option("--p-spam", p_spam, "measurement flip probability");
        o_mem = cmd->add_option("--p-mem", p_mem, "idle Z probability");
    }

    std::pair<double, NoiseParams> resolve(const json& cfg, NoiseParams fallback, double fallback_phys) {
        noise_from_config(cfg, "p_phys", o_phys, p_phys);
        noise_from_config(cfg, "p2", o_p2, p2);
        noise_from_config(cfg, "p_spam", o_spam, p_spam);
        noise_from_config(cfg, "p_mem", o_mem, p_mem);
        NoiseParams n = fallback;
        double phys = fallback_phys;
        if (p_phys >= 0) {
            n = NoiseParams::from_p_phys(p_phys);
            phys = p_phys;
        }
        if (p2 >= 0) n.p2 = p2;
        if (p_spam >= 0) n.p_spam = p_spam;
        if (p_mem >= 0) n.p_mem = p_mem;
        if (p_phys < 0) phys = n.p2;
        try {
            n.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        return {phys, n};
    }
};

std::vector<double> default_p_grid() {
    std::vector<double> out;
    for (int i = 0; i <= 8; i++) {
        out.push_back(std::pow(10.0, -4.0 + 0.25 * i));
    }
    return out;
}

CheckMatrix parse_target(const std::string& name) {
    if (name == "H") {
        return steane_parity_checks();
    }
    if (name == "effective") {
        return effective_target();
    }
    std::string rows = name;
    std::replace(rows.begin(), rows.end(), ',', '\n');
    try {
        return CheckMatrix::parse(rows);
    } catch (const std::exception& e) {
        throw ConfigError("bad --target: " + std::string(e.what()));
    }
}

std::string hooks_string(const std::set<Bits>& hooks) {
    std::string out;
    for (Bits h : hooks) {
        out += (out.empty() ? "" : ",") + PauliOperator(7, 0, h).str();
    }
    return out.empty() ? "-" : out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steane-code flag-and-fallback syndrome extraction toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    g.seed_opt = app.add_option("--seed", g.seed, "master seed (random and printed if absent)");
    g.threads_opt = app.add_option("--threads", g.threads, "worker threads (default: STEANE_SE_THREADS or all cores)");
    app.add_option("--config", g.config_path, "JSON config; command-line flags take precedence");
    app.add_option("--data-dir", g.data_dir, "directory holding circuits/ and decoder tables");

    // derive
    auto* derive = app.add_subcommand("derive", "BFS + flag search; writes circuit files and decoder tables");
    std::string derive_out;
    std::string derive_hooks = "Z1.Z2,Z2.Z5";
    int derive_max_extra = 3;
    derive->add_option("--out-dir", derive_out, "output directory (default: data dir)");
    derive->add_option("--hooks", derive_hooks, "required hook cosets of the base circuit, comma separated");
    derive->add_option("--max-extra", derive_max_extra, "largest flag-CNOT count to try");

    // derive-decoder
    auto* derive_decoder = app.add_subcommand("derive-decoder", "print decoder tables derived from the circuits");
    CircuitPaths dd_paths;
    dd_paths.add_to(derive_decoder);
    std::string dd_basis = "Z";
    derive_decoder->add_option("--basis", dd_basis, "primary basis (Z or X)");

    // verify-ft
    auto* verify = app.add_subcommand("verify-ft", "exhaustive single-fault check of both bases");
    CircuitPaths vf_paths;
    vf_paths.add_to(verify);
    bool vf_no_remap = false;
    bool vf_verbose = false;
    verify->add_flag("--no-remap", vf_no_remap, "decode flagged runs with the plain lookup table");
    verify->add_flag("--verbose", vf_verbose, "list counterexamples");

    // decode
    auto* decode = app.add_subcommand("decode", "offline decode of raw ancilla bits");
    CircuitPaths dc_paths;
    dc_paths.add_to(decode);
    std::string dc_basis = "Z";
    std::string dc_bits;
    bool dc_flag = false;
    decode->add_option("--basis", dc_basis, "primary basis of the cycle (Z or X)");
    decode->add_option("--bits", dc_bits, "raw bits b0 b1 b2, e.g. 011")->required();
    decode->add_flag("--flag", dc_flag, "bits come from the recovery run after a raised flag");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate at one noise setting");
    CircuitPaths sim_paths;
    sim_paths.add_to(simulate);
    NoiseOptions sim_noise;
    sim_noise.add_to(simulate);
    std::uint64_t sim_cycles = 2;
    std::uint64_t sim_shots = 100000;
    std::string sim_order = "ZX";
    std::string sim_out;
    auto* sim_cycles_opt = simulate->add_option("--cycles", sim_cycles, "extraction cycles per shot");
    auto* sim_shots_opt = simulate->add_option("--shots", sim_shots, "shots");
    auto* sim_order_opt = simulate->add_option("--order", sim_order, "basis order, ZX or XZ");
    auto* sim_out_opt = simulate->add_option("--out", sim_out, "CSV path (default stdout)");

    // sweep-p
    auto* sweep_p = app.add_subcommand("sweep-p", "logical error rate versus physical error rate");
    CircuitPaths sp_paths;
    sp_paths.add_to(sweep_p);
    std::vector<double> sp_p;
    std::uint64_t sp_cycles = 2;
    double sp_numerator = 20000;
    std::uint64_t sp_max_shots = 1'000'000;
    std::uint64_t sp_shots = 0;
    bool sp_full = false;
    std::string sp_order = "ZX";
    std::string sp_out;
    auto* sp_p_opt = sweep_p->add_option("--p", sp_p, "physical error rates (default log-spaced 1e-4..1e-2)")->delimiter(',');
    auto* sp_cycles_opt = sweep_p->add_option("--cycles", sp_cycles, "extraction cycles per shot");
    auto* sp_num_opt = sweep_p->add_option("--shots-numerator", sp_numerator, "shots = numerator / p");
    auto* sp_max_opt = sweep_p->add_option("--max-shots", sp_max_shots, "cap on shots per point");
    auto* sp_shots_opt = sweep_p->add_option("--shots", sp_shots, "fixed shots per point (overrides the rule)");
    sweep_p->add_flag("--full-scale", sp_full, "raise the cap to 1e7 shots per point");
    auto* sp_order_opt = sweep_p->add_option("--order", sp_order, "basis order, ZX or XZ");
    auto* sp_out_opt = sweep_p->add_option("--out", sp_out, "CSV path (default stdout)");

    // sweep-cycles
    auto* sweep_c = app.add_subcommand("sweep-cycles", "logical error rate versus number of cycles");
    CircuitPaths sc_paths;
    sc_paths.add_to(sweep_c);
    NoiseOptions sc_noise;
    sc_noise.add_to(sweep_c);
    std::vector<std::uint64_t> sc_n = {1, 2, 4, 8, 16, 32};
    std::uint64_t sc_shots = 100000;
    std::string sc_order = "ZX";
    std::string sc_out;
    auto* sc_n_opt = sweep_c->add_option("--n", sc_n, "ascending cycle counts")->delimiter(',');
    auto* sc_shots_opt = sweep_c->add_option("--shots", sc_shots, "shots per point");
    auto* sc_order_opt = sweep_c->add_option("--order", sc_order, "basis order, ZX or XZ");
    auto* sc_out_opt = sweep_c->add_option("--out", sc_out, "CSV path (default stdout)");

    // search-min-cnot
    auto* search_min = app.add_subcommand("search-min-cnot", "BFS distance and one geodesic to a 3x7 target");
    std::string sm_target = "H";
    search_min->add_option("--target", sm_target, "H, effective, or rows like 1111000,0110110,0011011");

    // search-flags
    auto* search_flags = app.add_subcommand("search-flags", "minimal flag CNOTs over geodesic base circuits");
    std::string sf_target = "H";
    std::size_t sf_limit = 100;
    int sf_max_extra = 3;
    bool sf_sample = false;
    bool sf_exhaustive = false;
    std::string sf_emit;
    search_flags->add_option("--target", sf_target, "H, effective, or explicit rows");
    search_flags->add_option("--limit", sf_limit, "number of base circuits");
    search_flags->add_option("--max-extra", sf_max_extra, "largest flag-CNOT count to try");
    search_flags->add_flag("--sample", sf_sample, "draw base circuits uniformly at random (uses --seed)");
    search_flags->add_flag("--exhaustive", sf_exhaustive, "every distinct geodesic circuit (long)");
    search_flags->add_option("--emit-circuits", sf_emit, "write each base circuit (and witness) to DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!g.config_path.empty()) {
            g.config = load_config(g.config_path);
        }
        from_config(g.config, "seed", g.seed_opt, g.seed);
        from_config(g.config, "threads", g.threads_opt, g.threads);
        RunOptions run_opt;
        run_opt.threads = resolve_threads(g);

        if (*derive) {
            std::set<Bits> hooks;
            std::stringstream ss(derive_hooks);
            std::string item;
            while (std::getline(ss, item, ',')) {
                PauliOperator p = PauliOperator::parse(item);
                if (p.x() != 0) {
                    throw ConfigError("hook cosets must be Z-type");
                }
                hooks.insert(detail::coset_rep(p.z()));
            }
            BfsTable table;
            CanonicalCircuits cc = derive_canonical(table, hooks, derive_max_extra);
            fs::path dir = derive_out.empty() ? fs::path(g.data_dir) : fs::path(derive_out);
            write_file(dir / "circuits" / "primary_z.circ", serialize(cc.primary));
            write_file(dir / "circuits" / "recovery_z.circ", serialize(cc.recovery));
            write_file(dir / "decoder_z.txt", serialize(cc.tables));
            std::cout << "distance(H) = " << table.distance(steane_parity_checks()) << "\n";
            std::cout << "distance(M*) = " << table.distance(effective_target()) << "\n";
            std::cout << "base geodesic: " << to_string(cc.geodesic) << " (candidate " << cc.bases_tried << ")\n";
            std::cout << "hooks: " << hooks_string(hook_cosets(cc.base)) << "\n";
            std::cout << "m(C) = " << *cc.flags.m << " (" << cc.flags.witnesses.size() << " minimal placements, orientation "
                      << to_string(cc.witness.orientation) << ")\n";
            std::cout << "primary: " << cc.primary.cnot_count() << " CNOTs, recovery: " << cc.recovery.cnot_count()
                      << " CNOTs\n";
            std::cout << "verify-ft Z: " << cc.report.summary() << "\n";
            std::cout << "wrote " << (dir / "circuits").string() << "/{primary_z,recovery_z}.circ and "
                      << (dir / "decoder_z.txt").string() << "\n";
            return 0;
        }

        if (*derive_decoder) {
            auto [p, r] = dd_paths.load(g);
            Basis b = parse_basis(dd_basis);
            Circuit pb = b == Basis::Z ? p : dualize(p);
            Circuit rb = b == Basis::Z ? dualize(r) : r;
            std::cout << serialize(build_remap(pb, rb));
            return 0;
        }

        if (*verify) {
            auto [p, r] = vf_paths.load(g);
            bool ok = true;
            for (Basis b : {Basis::Z, Basis::X}) {
                Circuit pb = b == Basis::Z ? p : dualize(p);
                Circuit rb = b == Basis::Z ? dualize(r) : r;
                DecoderTables t = vf_no_remap ? standard_tables(pb, rb) : build_remap(pb, rb);
                FtReport rep = verify_ft_conditions(pb, rb, t);
                std::cout << "basis " << basis_char(b) << ": " << rep.summary() << " (" << rep.faults_checked
                          << " fault locations, " << rep.flagged_faults << " flagged, " << rep.data_errors_checked
                          << " input errors)\n";
                if (vf_verbose) {
                    for (const auto* list : {&rep.data_error_failures, &rep.unflagged_failures, &rep.flagged_failures}) {
                        for (const auto& s : *list) {
                            std::cout << "  " << s << "\n";
                        }
                    }
                }
                ok = ok && rep.all_pass();
            }
            std::cout << (ok ? "(i) PASS (ii)(a) PASS (ii)(b) PASS" : "FT verification FAILED") << "\n";
            return ok ? 0 : 2;
        }

        if (*decode) {
            auto [p, r] = dc_paths.load(g);
            Basis b = parse_basis(dc_basis);
            if (dc_bits.size() != 3 || dc_bits.find_first_not_of("01") != std::string::npos) {
                throw ConfigError("--bits needs three 0/1 characters");
            }
            ProtocolSetup setup(p, r);
            const auto& side = setup.side(b);
            Bits raw = bits_from_string(dc_bits);
            const SyndromeMapSpec& map = dc_flag ? side.tables.recovery_map : side.tables.primary_map;
            Bits s = raw_to_syndrome(map, raw);
            PauliOperator corr = dc_flag ? decode_remap(side.tables, s) : decode_standard(side.tables, s);
            std::cout << "syndrome " << bits_to_string(s, 3) << "\n";
            std::cout << describe(corr) << "\n";
            std::cout << "correction " << corr.str() << "\n";
            return 0;
        }

        if (*simulate) {
            auto [p, r] = sim_paths.load(g);
            from_config(g.config, "n_cycles", sim_cycles_opt, sim_cycles);
            from_config(g.config, "shots", sim_shots_opt, sim_shots);
            from_config(g.config, "basis_order", sim_order_opt, sim_order);
            from_config(g.config, "out", sim_out_opt, sim_out);
            auto [phys, noise] = sim_noise.resolve(g.config, NoiseParams::from_p_phys(1e-3), 1e-3);
            if (sim_cycles == 0 || sim_shots == 0) {
                throw ConfigError("--cycles and --shots must be positive");
            }
            run_opt.order = parse_basis_order(sim_order);
            run_opt.seed = resolve_seed(g);
            ProtocolSetup setup(p, r);
            SweepResult res;
            res.points.push_back(run_point(setup, phys, noise, sim_cycles, sim_shots, run_opt.seed, run_opt));
            json meta = {{"schema_version", kSchemaVersion}, {"command", "simulate"}, {"seed", run_opt.seed},
                         {"n_cycles", sim_cycles}, {"shots", sim_shots}, {"basis_order", sim_order},
                         {"noise", noise_json(noise)}, {"convention", convention_tag(run_opt.order)}};
            emit_csv(res, sim_out, meta);
            return 0;
        }

        if (*sweep_p) {
            auto [p, r] = sp_paths.load(g);
            from_config(g.config, "p_list", sp_p_opt, sp_p);
            from_config(g.config, "n_cycles", sp_cycles_opt, sp_cycles);
            from_config(g.config, "shots_numerator", sp_num_opt, sp_numerator);
            from_config(g.config, "max_shots", sp_max_opt, sp_max_shots);
            from_config(g.config, "shots", sp_shots_opt, sp_shots);
            from_config(g.config, "basis_order", sp_order_opt, sp_order);
            from_config(g.config, "out", sp_out_opt, sp_out);
            if (sp_p.empty()) {
                sp_p = default_p_grid();
            }
            for (double v : sp_p) {
                if (!(v >= 0 && v < 0.5)) {
                    throw ConfigError("every --p must lie in [0, 0.5)");
                }
            }
            if (sp_cycles == 0 || sp_numerator <= 0) {
                throw ConfigError("--cycles and --shots-numerator must be positive");
            }
            ShotRule rule;
            rule.numerator = sp_numerator;
            rule.cap = sp_full && sp_max_opt->count() == 0 ? 10'000'000 : sp_max_shots;
            if (sp_shots > 0) {
                rule.fixed = sp_shots;
            }
            run_opt.order = parse_basis_order(sp_order);
            run_opt.seed = resolve_seed(g);
            ProtocolSetup setup(p, r);
            SweepResult res = sweep_physical_rate(setup, sp_p, sp_cycles, rule, run_opt);
            json meta = {{"schema_version", kSchemaVersion}, {"command", "sweep-p"}, {"seed", run_opt.seed},
                         {"p_list", sp_p}, {"n_cycles", sp_cycles}, {"shots_numerator", rule.numerator},
                         {"max_shots", rule.cap}, {"basis_order", sp_order},
                         {"convention", convention_tag(run_opt.order)}};
            if (rule.fixed) {
                meta["shots"] = *rule.fixed;
            }
            emit_csv(res, sp_out, meta);
            for (const auto& pt : res.points) {
                std::cerr << "p=" << pt.p_phys << " p_L=" << pt.p_l << " p_L/p^2=" << pt.per_p2() << "\n";
            }
            return 0;
        }

        if (*sweep_c) {
            auto [p, r] = sc_paths.load(g);
            from_config(g.config, "n_list", sc_n_opt, sc_n);
            from_config(g.config, "shots", sc_shots_opt, sc_shots);
            from_config(g.config, "basis_order", sc_order_opt, sc_order);
            from_config(g.config, "out", sc_out_opt, sc_out);
            auto [phys, noise] = sc_noise.resolve(g.config, NoiseParams{1e-3, 1e-3, 1e-4}, 1e-3);
            (void)phys;
            if (sc_shots == 0) {
                throw ConfigError("--shots must be positive");
            }
            run_opt.order = parse_basis_order(sc_order);
            run_opt.seed = resolve_seed(g);
            ProtocolSetup setup(p, r);
            SweepResult res = sweep_cycles(setup, sc_n, noise, sc_shots, run_opt);
            json meta = {{"schema_version", kSchemaVersion}, {"command", "sweep-cycles"}, {"seed", run_opt.seed},
                         {"n_list", sc_n}, {"shots", sc_shots}, {"basis_order", sc_order},
                         {"noise", noise_json(noise)}, {"convention", convention_tag(run_opt.order)}};
            emit_csv(res, sc_out, meta);
            for (const auto& pt : res.points) {
                std::cerr << "N=" << pt.n_cycles << " p_L=" << pt.p_l << " p_L/N=" << pt.per_cycle() << "\n";
            }
            return 0;
        }

        if (*search_min) {
            CheckMatrix target = parse_target(sm_target);
            BfsTable table;
            BfsSummary s = bfs_min_cnots(table, target);
            std::cout << "distance " << s.distance << "\n";
            std::cout << "geodesic " << (s.geodesic.empty() ? "-" : to_string(s.geodesic)) << "\n";
            std::cout << "shortest sequences " << table.path_counts()[pack(target)] << "\n";
            std::cout << "states per distance";
            for (std::size_t n : table.layer_sizes()) {
                std::cout << " " << n;
            }
            std::cout << "\n";
            return 0;
        }

        if (*search_flags) {
            CheckMatrix target = parse_target(sf_target);
            BfsTable table;
            std::vector<MovePath> batch;
            std::size_t index = 0;
            std::map<int, std::size_t> histogram;  // m(C) -> count; max_extra + 1 = above
            const bool print_rows = !sf_exhaustive;
            const int above = sf_max_extra + 1;
            std::mutex out_mu;
            if (print_rows) {
                std::cout << "index\tm(C)\thooks\tgeodesic\n";
            }
            auto flush = [&] {
                std::vector<FlagSearchResult> results(batch.size());
                std::vector<Circuit> bases(batch.size());
                std::atomic<std::size_t> next{0};
                auto work = [&] {
                    for (std::size_t i = next++; i < batch.size(); i = next++) {
                        bases[i] = extract_circuit(batch[i], target);
                        results[i] = min_flag_cnots(bases[i], sf_max_extra, false);
                    }
                };
                std::vector<std::thread> pool;
                for (unsigned t = 1; t < run_opt.threads; t++) pool.emplace_back(work);
                work();
                for (auto& th : pool) th.join();
                std::lock_guard<std::mutex> lock(out_mu);
                for (std::size_t i = 0; i < batch.size(); i++) {
                    std::size_t id = ++index;
                    int m = results[i].m ? *results[i].m : above;
                    histogram[m]++;
                    if (print_rows) {
                        std::cout << id << "\t" << (results[i].m ? std::to_string(m) : ">" + std::to_string(sf_max_extra))
                                  << "\t" << hooks_string(hook_cosets(bases[i])) << "\t" << to_string(batch[i]) << "\n";
                    }
                    if (!sf_emit.empty()) {
                        char name[64];
                        std::snprintf(name, sizeof name, "base_%06zu.circ", id);
                        write_file(fs::path(sf_emit) / name, serialize(bases[i]));
                        if (results[i].m && *results[i].m > 0) {
                            std::snprintf(name, sizeof name, "base_%06zu_flagged.circ", id);
                            write_file(fs::path(sf_emit) / name, serialize(place_flag(bases[i], results[i].witnesses[0])));
                        }
                    }
                }
                batch.clear();
            };
            if (sf_sample && !sf_exhaustive) {
                std::uint64_t seed = resolve_seed(g);
                for (std::size_t i = 0; i < sf_limit; i++) {
                    CounterRng rng(seed, i);
                    batch.push_back(sample_geodesic(table, target, rng));
                    if (batch.size() == 4096) flush();
                }
            } else {
                GeodesicOptions gopt;
                gopt.limit = sf_exhaustive ? 0 : sf_limit;
                enumerate_geodesics(table, target, gopt, [&](const MovePath& p) {
                    batch.push_back(p);
                    if (batch.size() == 4096) flush();
                    return true;
                });
            }
            flush();
            std::cout << "base circuits " << index << "\n";
            for (const auto& [m, n] : histogram) {
                std::cout << "m(C) " << (m == above ? ">" + std::to_string(sf_max_extra) : std::to_string(m)) << ": "
                          << n << "\n";
            }
            if (!histogram.empty()) {
                int lo = histogram.begin()->first;
                std::cout << "minimum m(C) " << (lo == above ? ">" + std::to_string(sf_max_extra) : std::to_string(lo))
                          << "\n";
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
