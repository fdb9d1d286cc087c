#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppbf/code.hpp"
#include "ppbf/decoder.hpp"
#include "ppbf/serialize.hpp"
#include "ppbf/sim.hpp"
#include "ppbf/verify.hpp"
#include "ppbf/version.hpp"

namespace ppbf::cli {

namespace detail {

inline std::vector<int> parse_sizes(const std::string& spec) {
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw invalid_parameter("empty lattice size list '" + spec + "'");
    return out;
}

// Either a comma list of probabilities or a start:stop:step range, inclusive.
inline std::vector<double> parse_probabilities(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a = 0, b = 0, c = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &c) != 3 || c <= 0)
            throw invalid_parameter("bad probability range '" + spec + "', want start:stop:step");
        for (int k = 0;; ++k) {
            const double v = std::round((a + k * c) * 1e10) / 1e10;
            if (v > b + c / 2) break;
            out.push_back(v);
        }
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw invalid_parameter("empty probability list '" + spec + "'");
    return out;
}

// Syndrome as a 01 string of length m, or hex (0x...) read nibble by nibble,
// most significant bit of each nibble first.
inline BitVector parse_syndrome(const std::string& spec, int m) {
    BitVector s(m);
    if (spec.rfind("0x", 0) == 0 || spec.rfind("0X", 0) == 0) {
        const std::string hex = spec.substr(2);
        const int need = (m + 3) / 4;
        if (static_cast<int>(hex.size()) != need)
            throw invalid_parameter("hex syndrome needs " + std::to_string(need) + " digits");
        for (int i = 0; i < m; ++i) {
            const char ch = hex[i / 4];
            int nib;
            if (ch >= '0' && ch <= '9')
                nib = ch - '0';
            else if (ch >= 'a' && ch <= 'f')
                nib = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F')
                nib = ch - 'A' + 10;
            else
                throw invalid_parameter("bad hex digit in syndrome");
            if ((nib >> (3 - i % 4)) & 1) s.set(i, true);
        }
        return s;
    }
    if (static_cast<int>(spec.size()) != m)
        throw invalid_parameter("syndrome needs " + std::to_string(m) + " bits, got " +
                                std::to_string(spec.size()));
    for (int i = 0; i < m; ++i) {
        if (spec[i] != '0' && spec[i] != '1') throw invalid_parameter("syndrome bits must be 0/1");
        if (spec[i] == '1') s.set(i, true);
    }
    return s;
}

inline DecoderKind parse_decoder(const std::string& name) {
    if (name == "ppbf") return DecoderKind::ppbf;
    if (name == "classical-bf") return DecoderKind::classical_bf;
    throw invalid_parameter("unknown decoder '" + name + "'");
}

struct CommonOpts {
    std::string family = "toric";
    std::uint64_t seed = 0;
    int depth = 0;
    int max_trials = 100000;
    int target_failures = 100;
    int jobs = 0;
    std::string decoder = "ppbf";
    std::string format = "csv";
    bool timings = false;
};

inline void add_stat_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "Base seed (default 0)");
    cmd->add_option("--depth", o.depth, "Influence depth D (default: D = L)");
    cmd->add_option("--max-trials", o.max_trials, "Trial cap per point (default 100000)");
    cmd->add_option("--target-failures", o.target_failures,
                    "Stop a point after this many failures (default 100)");
    cmd->add_option("--jobs", o.jobs, "Worker threads (default: hardware concurrency)");
    cmd->add_option("--decoder", o.decoder, "ppbf | classical-bf (default ppbf)");
    cmd->add_option("--format", o.format, "csv | jsonl (default csv)");
    cmd->add_flag("--timings", o.timings,
                  "Report wall time in the seconds column (breaks byte reproducibility)");
}

inline std::string depth_echo(int depth) { return depth > 0 ? std::to_string(depth) : "L"; }

} // namespace detail

// Dispatches one invocation. Returns 0 on success, 1 on usage errors,
// 2 on verification failure, 3 on runtime errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Progressive-proximity bit-flipping decoder for toric and rotated planar codes"};
    app.require_subcommand(1);

    detail::CommonOpts o;
    std::string l_spec = "3", p_spec = "0.05", syndrome_spec, out_path;

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo at one (family, L, p) point");
    simulate->add_option("--family", o.family, "toric | rotated-planar")->required();
    simulate->add_option("--L", l_spec, "Lattice size")->required();
    simulate->add_option("--p", p_spec, "Physical error rate")->required();
    detail::add_stat_options(simulate, o);

    auto* sweep = app.add_subcommand("sweep", "Grid of points plus a threshold estimate");
    sweep->add_option("--family", o.family, "toric | rotated-planar")->required();
    sweep->add_option("--L", l_spec, "Comma list of lattice sizes, e.g. 5,7,9")->required();
    sweep->add_option("--p", p_spec, "Comma list or start:stop:step range")->required();
    detail::add_stat_options(sweep, o);

    auto* decode = app.add_subcommand("decode", "Decode one syndrome and print the estimate");
    decode->add_option("--family", o.family, "toric | rotated-planar")->required();
    decode->add_option("--L", l_spec, "Lattice size")->required();
    decode->add_option("--syndrome", syndrome_spec, "Syndrome bits (01 string or 0x hex)")
        ->required();
    decode->add_option("--depth", o.depth, "Influence depth D (default: D = L)");

    auto* verify_cmd = app.add_subcommand("verify", "Run the oracle property battery");
    verify_cmd->add_option("--family", o.family, "Restrict to one family");
    std::string verify_l;
    verify_cmd->add_option("--L", verify_l, "Restrict to one lattice size");
    verify_cmd->add_option("--depth", o.depth, "Influence depth D (default: D = L)");

    auto* dump = app.add_subcommand("dump-code", "Emit the code model as JSON");
    dump->add_option("--family", o.family, "toric | rotated-planar")->required();
    dump->add_option("--L", l_spec, "Lattice size")->required();
    dump->add_option("--out", out_path, "Output file (default stdout)");

    auto* build_cmd = app.add_subcommand("build-template", "Build and cache an influence template");
    build_cmd->add_option("--family", o.family, "toric | rotated-planar")->required();
    build_cmd->add_option("--L", l_spec, "Lattice size")->required();
    build_cmd->add_option("--depth", o.depth, "Influence depth D (default: D = L)");

    std::vector<std::string> argv_vec = args;
    try {
        std::vector<const char*> argv;
        argv.push_back("ppbf");
        for (const auto& a : argv_vec) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    }

    try {
        const bool jsonl = o.format == "jsonl";
        if (o.format != "csv" && o.format != "jsonl")
            throw invalid_parameter("unknown format '" + o.format + "'");

        if (simulate->parsed() || sweep->parsed()) {
            const Family family = family_from_name(o.family);
            const auto Ls = detail::parse_sizes(l_spec);
            const auto ps = detail::parse_probabilities(p_spec);
            const DecoderKind dec = detail::parse_decoder(o.decoder);

            out << "# ppbf " << kVersion << '\n';
            out << "# config: cmd=" << (sweep->parsed() ? "sweep" : "simulate")
                << " family=" << o.family << " L=" << l_spec << " p=" << p_spec
                << " depth=" << detail::depth_echo(o.depth) << " seed=" << o.seed
                << " decoder=" << o.decoder << " max-trials=" << o.max_trials
                << " target-failures=" << o.target_failures << " format=" << o.format
                << " timings=" << (o.timings ? "on" : "off") << '\n';
            err << "jobs=" << (o.jobs > 0 ? std::to_string(o.jobs) : std::string("auto")) << '\n';
            if (!jsonl) out << csv_header() << '\n';

            if (simulate->parsed()) {
                if (Ls.size() != 1 || ps.size() != 1)
                    throw invalid_parameter("simulate takes a single L and a single p");
                TrialConfig cfg;
                cfg.family = family;
                cfg.L = Ls[0];
                cfg.p = ps[0];
                cfg.D = o.depth > 0 ? o.depth : Ls[0];
                cfg.seed = o.seed;
                cfg.max_trials = o.max_trials;
                cfg.target_failures = o.target_failures;
                cfg.decoder = dec;
                const InfluenceTemplate tmpl =
                    load_or_build_template(family, cfg.L, cfg.D, &err);
                const CodeModel code = build_code(family, cfg.L);
                const ErrorRatePoint pt = run_point(cfg, code, tmpl, o.jobs);
                out << (jsonl ? jsonl_row(pt, o.timings) : csv_row(pt, o.timings)) << '\n';
                err << "point seconds=" << pt.wall_seconds << '\n';
                return 0;
            }

            SweepConfig sc;
            sc.family = family;
            sc.Ls = Ls;
            sc.ps = ps;
            sc.base_seed = o.seed;
            sc.D_override = o.depth;
            sc.decoder = dec;
            sc.max_trials = o.max_trials;
            sc.target_failures = o.target_failures;
            sc.jobs = o.jobs;

            const auto points = run_sweep(
                sc,
                [&](const ErrorRatePoint& pt) {
                    out << (jsonl ? jsonl_row(pt, o.timings) : csv_row(pt, o.timings)) << '\n';
                    err << "point L=" << pt.config.L << " p=" << pt.config.p
                        << " seconds=" << pt.wall_seconds << '\n';
                },
                &err);

            if (Ls.size() >= 2 && ps.size() >= 3) {
                const ThresholdEstimate th = estimate_threshold(points);
                if (jsonl) {
                    nlohmann::json j;
                    j["threshold"] = th.found
                                         ? nlohmann::json{{"low", th.low}, {"high", th.high}}
                                         : nlohmann::json(nullptr);
                    out << j.dump() << '\n';
                } else if (th.found) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "# threshold-interval = [%.6g, %.6g]", th.low,
                                  th.high);
                    out << buf << '\n';
                } else {
                    out << "# threshold-interval = none\n";
                }
            }
            return 0;
        }

        if (decode->parsed()) {
            const Family family = family_from_name(o.family);
            const int L = detail::parse_sizes(l_spec).at(0);
            const int D = o.depth > 0 ? o.depth : L;
            const CodeModel code = build_code(family, L);
            const InfluenceTemplate tmpl = load_or_build_template(family, L, D, &err);
            const BitVector s = detail::parse_syndrome(syndrome_spec, code.m);

            nlohmann::json cfg;
            cfg["command"] = "decode";
            cfg["family"] = o.family;
            cfg["L"] = L;
            cfg["D"] = D;
            cfg["syndrome_weight"] = s.weight();
            out << cfg.dump() << '\n';

            const DecodeOutcome res = ppbf_decode(code, tmpl, s);
            nlohmann::json j;
            j["estimate"] = res.estimate.to_string01();
            j["estimate_support"] = res.estimate.ones();
            j["estimate_weight"] = res.estimate.weight();
            j["bf_flips"] = res.bf_flips;
            j["matching_rounds"] = res.matching_rounds;
            j["residual_weight"] = res.residual_syndrome.weight();
            j["converged"] = res.converged;
            out << j.dump() << '\n';
            return 0;
        }

        if (verify_cmd->parsed()) {
            std::vector<Family> fams{Family::toric, Family::rotated_planar};
            if (verify_cmd->count("--family")) fams = {family_from_name(o.family)};
            std::vector<int> sizes{3, 5};
            if (!verify_l.empty()) sizes = detail::parse_sizes(verify_l);
            err << "verify families=" << (verify_cmd->count("--family") ? o.family : "all")
                << " L=" << (verify_l.empty() ? "3,5" : verify_l)
                << " depth=" << detail::depth_echo(o.depth) << '\n';

            bool all_pass = true;
            for (Family fam : fams)
                for (int L : sizes) {
                    const auto results = verify::run_battery(fam, L, o.depth);
                    for (const auto& r : results) {
                        all_pass = all_pass && r.pass;
                        nlohmann::json j;
                        j["property"] = r.name;
                        j["family"] = family_name(r.family);
                        j["L"] = r.L;
                        j["status"] = r.pass ? "pass" : "fail";
                        if (!r.detail.empty()) j["detail"] = r.detail;
                        out << j.dump() << '\n';
                    }
                }
            return all_pass ? 0 : 2;
        }

        if (dump->parsed()) {
            const Family family = family_from_name(o.family);
            const int L = detail::parse_sizes(l_spec).at(0);
            const CodeModel code = build_code(family, L);
            err << "dumping " << family_name(family) << " L=" << L << '\n';
            const std::string doc = code_to_json(code).dump(2);
            if (out_path.empty()) {
                out << doc << '\n';
            } else {
                std::ofstream f(out_path);
                if (!f) throw std::runtime_error("cannot open " + out_path);
                f << doc << '\n';
            }
            return 0;
        }

        if (build_cmd->parsed()) {
            const Family family = family_from_name(o.family);
            const int L = detail::parse_sizes(l_spec).at(0);
            const int D = o.depth > 0 ? o.depth : L;
            load_or_build_template(family, L, D, &err);
            nlohmann::json j;
            j["family"] = family_name(family);
            j["L"] = L;
            j["D"] = D;
            j["path"] = template_cache_file(family, L, D).string();
            out << j.dump() << '\n';
            return 0;
        }

        err << "no subcommand given\n";
        return 1;
    } catch (const invalid_parameter& ex) {
        err << "usage error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return 3;
    }
}

} // namespace ppbf::cli
