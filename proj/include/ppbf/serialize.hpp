#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppbf/code.hpp"
#include "ppbf/influence.hpp"
#include "ppbf/sim.hpp"
#include "ppbf/version.hpp"

namespace ppbf {

inline Family family_from_name(const std::string& name) {
    if (name == "toric") return Family::toric;
    if (name == "rotated-planar") return Family::rotated_planar;
    throw invalid_parameter("unknown code family '" + name + "'");
}

inline nlohmann::json code_to_json(const CodeModel& code) {
    nlohmann::json j;
    j["family"] = family_name(code.family);
    j["L"] = code.L;
    j["checks"] = code.check_adjacency;
    std::vector<std::vector<std::size_t>> logicals;
    for (const auto& rep : code.logical_representatives) logicals.push_back(rep.ones());
    j["logicals"] = logicals;
    return j;
}

// ---------------------------------------------------------------------------
// Influence template cache, keyed by (family, L, D).
// ---------------------------------------------------------------------------

inline nlohmann::json template_to_json(const InfluenceTemplate& t) {
    nlohmann::json j;
    j["family"] = family_name(t.family);
    j["L"] = t.L;
    j["D"] = t.D;
    j["embed_rows"] = t.embed_rows;
    j["embed_cols"] = t.embed_cols;
    j["ref_check"] = t.ref_check;
    j["rho_c"] = t.rho_c;
    j["rho_vo"] = t.rho_vo;
    j["rho_ve"] = t.rho_ve;
    j["gamma_ref"] = t.gamma_ref;
    j["nu_ref"] = t.nu_ref;
    j["alpha_ref"] = t.alpha_ref;
    j["phi_c"] = t.phi_c;
    j["phi_v"] = t.phi_v;
    j["alpha_rows"] = t.alpha_rows;
    j["code_checks"] = t.code_checks;
    j["code_vars"] = t.code_vars;
    return j;
}

inline InfluenceTemplate template_from_json(const nlohmann::json& j) {
    InfluenceTemplate t;
    t.family = family_from_name(j.at("family").get<std::string>());
    t.L = j.at("L").get<int>();
    t.D = j.at("D").get<int>();
    t.embed_rows = j.at("embed_rows").get<int>();
    t.embed_cols = j.at("embed_cols").get<int>();
    t.ref_check = j.at("ref_check").get<int>();
    t.rho_c = j.at("rho_c").get<int>();
    t.rho_vo = j.at("rho_vo").get<int>();
    t.rho_ve = j.at("rho_ve").get<int>();
    t.gamma_ref = j.at("gamma_ref").get<std::vector<std::int64_t>>();
    t.nu_ref = j.at("nu_ref").get<std::vector<std::int64_t>>();
    t.alpha_ref = j.at("alpha_ref").get<std::vector<std::int32_t>>();
    t.phi_c = j.at("phi_c").get<std::vector<std::int32_t>>();
    t.phi_v = j.at("phi_v").get<std::vector<std::int32_t>>();
    t.alpha_rows = j.at("alpha_rows").get<std::vector<std::int32_t>>();
    t.code_checks = j.at("code_checks").get<int>();
    t.code_vars = j.at("code_vars").get<int>();
    return t;
}

inline std::filesystem::path template_cache_dir() {
    if (const char* env = std::getenv("PPBF_CACHE_DIR"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "ppbf";
    return std::filesystem::path(".ppbf-cache");
}

inline std::filesystem::path template_cache_file(Family family, int L, int D) {
    return template_cache_dir() / ("template-" + std::string(family_name(family)) + "-L" +
                                   std::to_string(L) + "-D" + std::to_string(D) + ".json");
}

// Load the cached template when present and well-keyed; otherwise build and
// cache it (best effort: an unwritable cache directory only logs).
inline InfluenceTemplate load_or_build_template(Family family, int L, int D,
                                                std::ostream* log = nullptr) {
    const auto path = template_cache_file(family, L, D);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
        try {
            std::ifstream in(path);
            nlohmann::json j;
            in >> j;
            InfluenceTemplate t = template_from_json(j);
            if (t.family == family && t.L == L && t.D == D) {
                if (log) (*log) << "loaded influence template from " << path.string() << '\n';
                return t;
            }
            if (log) (*log) << "cache key mismatch in " << path.string() << ", rebuilding\n";
        } catch (const std::exception& ex) {
            if (log) (*log) << "ignoring unreadable cache " << path.string() << ": " << ex.what()
                            << '\n';
        }
    }
    InfluenceTemplate t = build_template(family, L, D);
    try {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        out << template_to_json(t);
        if (log) (*log) << "cached influence template at " << path.string() << '\n';
    } catch (const std::exception& ex) {
        if (log) (*log) << "could not cache template: " << ex.what() << '\n';
    }
    return t;
}

// ---------------------------------------------------------------------------
// Result rows. Formatting is fixed so identical results give identical bytes.
// ---------------------------------------------------------------------------

namespace detail {
inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}
} // namespace detail

inline std::string csv_header() {
    return "family,L,D,p,decoder,trials,failures,rate,ci_low,ci_high,seed,seconds";
}

inline std::string csv_row(const ErrorRatePoint& pt, bool timings) {
    const auto& c = pt.config;
    std::string row;
    row += family_name(c.family);
    row += ',' + std::to_string(c.L);
    row += ',' + std::to_string(effective_depth(c));
    row += ',' + detail::fmt("%.6g", c.p);
    row += ',';
    row += decoder_name(c.decoder);
    row += ',' + std::to_string(pt.trials_run);
    row += ',' + std::to_string(pt.logical_failures);
    row += ',' + detail::fmt("%.10g", pt.logical_error_rate);
    row += ',' + detail::fmt("%.10g", pt.ci_low);
    row += ',' + detail::fmt("%.10g", pt.ci_high);
    row += ',' + std::to_string(c.seed);
    row += ',' + detail::fmt("%.3f", timings ? pt.wall_seconds : 0.0);
    return row;
}

inline std::string jsonl_row(const ErrorRatePoint& pt, bool timings) {
    const auto& c = pt.config;
    nlohmann::json j;
    j["family"] = family_name(c.family);
    j["L"] = c.L;
    j["D"] = effective_depth(c);
    j["p"] = c.p;
    j["decoder"] = decoder_name(c.decoder);
    j["trials"] = pt.trials_run;
    j["failures"] = pt.logical_failures;
    j["rate"] = pt.logical_error_rate;
    j["ci_low"] = pt.ci_low;
    j["ci_high"] = pt.ci_high;
    j["seed"] = c.seed;
    j["seconds"] = timings ? pt.wall_seconds : 0.0;
    return j.dump();
}

} // namespace ppbf
