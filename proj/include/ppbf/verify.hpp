#pragma once

#include <string>
#include <vector>

#include "ppbf/code.hpp"
#include "ppbf/decoder.hpp"
#include "ppbf/influence.hpp"
#include "ppbf/lattice.hpp"
#include "ppbf/oracle.hpp"
#include "ppbf/rng.hpp"

// Oracle-backed property battery behind the `verify` subcommand.
namespace ppbf::verify {

struct PropertyResult {
    std::string name;
    Family family{};
    int L = 0;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline bool shift_matches_direct(const CodeModel& code, const InfluenceTemplate& t, int D,
                                 std::string& detail) {
    if (code.family == Family::toric) {
        const auto h = oracle::densify(code.check_adjacency, code.n);
        for (int j = 0; j < code.m; ++j) {
            BitVector seed(code.m);
            seed.set(j, true);
            const auto direct = oracle::recursive_influence_direct(h, seed, D);
            const auto [gamma, nu] = shift_influence(t, j);
            if (gamma != direct.gamma || nu != direct.nu) {
                detail = "mismatch at check " + std::to_string(j);
                return false;
            }
        }
        return true;
    }
    const auto patch = oracle::build_bulk_patch(code.L, D + 2);
    for (int j = 0; j < code.m; ++j) {
        BitVector seed(patch.num_checks);
        const auto f = lattice::rot_check_face(code.L, j);
        seed.set(oracle::bulk_check_for(patch, f.fr, f.fc), true);
        const auto direct = oracle::recursive_influence_direct(patch.h, seed, D);
        const auto [gamma, nu] = shift_influence(t, j);
        for (int p = 0; p < code.m; ++p) {
            const auto fp = lattice::rot_check_face(code.L, p);
            if (gamma[p] != direct.gamma[oracle::bulk_check_for(patch, fp.fr, fp.fc)]) {
                detail = "gamma mismatch at checks " + std::to_string(j) + "," + std::to_string(p);
                return false;
            }
        }
        for (int r = 0; r < code.L; ++r)
            for (int c = 0; c < code.L; ++c)
                if (nu[r * code.L + c] != direct.nu[oracle::bulk_qubit_for(patch, r, c)]) {
                    detail = "nu mismatch at check " + std::to_string(j);
                    return false;
                }
    }
    return true;
}

} // namespace detail

// Runs the full battery for one code; D = 0 picks the default depth L.
inline std::vector<PropertyResult> run_battery(Family family, int L, int D = 0) {
    const int depth = D > 0 ? D : L;
    std::vector<PropertyResult> out;
    auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back({name, family, L, pass, detail});
    };

    const CodeModel code = build_code(family, L);
    const InfluenceTemplate tmpl = build_template(family, L, depth);

    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < code.m && ok; ++i)
            for (auto q : code.check_adjacency[i]) {
                const auto& col = code.variable_adjacency[q];
                if (std::find(col.begin(), col.end(), i) == col.end()) {
                    ok = false;
                    detail = "check " + std::to_string(i) + " vs variable " + std::to_string(q);
                    break;
                }
            }
        report("transpose-consistency", ok, detail);
    }

    {
        bool ok = true;
        if (family == Family::toric) {
            ok = code.n == 2 * L * L && code.m == L * L;
            for (const auto& row : code.check_adjacency) ok = ok && row.size() == 4;
            for (const auto& col : code.variable_adjacency) ok = ok && col.size() == 2;
        } else {
            ok = code.n == L * L && code.m == (L * L - 1) / 2;
            for (const auto& row : code.check_adjacency)
                ok = ok && (row.size() == 2 || row.size() == 4);
            for (const auto& col : code.variable_adjacency)
                ok = ok && (col.size() == 1 || col.size() == 2);
        }
        report("degree-profile", ok);
    }

    {
        bool ok = true;
        for (const auto& rep : code.logical_representatives) {
            ok = ok && syndrome(code, rep).is_zero();
            ok = ok && rep.weight() == static_cast<std::size_t>(L);
        }
        report("logical-kernel", ok);
    }

    {
        const int rank = oracle::gf2_rank(oracle::densify(code.check_adjacency, code.n));
        const int expected = family == Family::toric ? code.m - 1 : code.m;
        report("check-matrix-rank", rank == expected,
               "rank " + std::to_string(rank) + ", expected " + std::to_string(expected));
    }

    {
        std::string detail;
        const bool ok = detail::shift_matches_direct(code, tmpl, depth, detail);
        report("shift-direct-equivalence", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (int j = 0; j < code.m && ok; ++j) {
            const auto alpha = shift_alpha(tmpl, j);
            const auto dist = oracle::bfs_distances(code, j, depth);
            for (int q = 0; q < code.n; ++q)
                if (alpha[q] != dist[q]) {
                    ok = false;
                    detail = "check " + std::to_string(j) + " qubit " + std::to_string(q);
                    break;
                }
        }
        report("alpha-bfs-equivalence", ok, detail);
    }

    {
        bool ok = true;
        CounterRng rng(derive_seed(2024, L, family == Family::toric ? 0 : 1));
        const auto thr = bernoulli_threshold(0.1);
        for (int rep = 0; rep < 200 && ok; ++rep) {
            BitVector e(code.n);
            for (int q = 0; q < code.n; ++q)
                if (rng.bernoulli(thr)) e.set(q, true);
            const BitVector s = syndrome(code, e);
            auto st = compute_proximity_vector(tmpl, s);
            std::vector<int> all;
            for (int i = 0; i < code.m; ++i)
                if (s.get(i)) all.push_back(i);
            shift_and_remove(st, tmpl, all);
            for (auto v : st.nu) ok = ok && v == 0;
            for (auto v : st.gamma) ok = ok && v == 0;
        }
        report("accumulate-remove-roundtrip", ok);
    }

    {
        bool ok = true;
        std::string detail;
        for (int q = 0; q < code.n && ok; ++q) {
            BitVector e(code.n);
            e.set(q, true);
            const DecodeOutcome o = ppbf_decode(code, tmpl, syndrome(code, e));
            if (!o.converged || is_logical_failure(code, e, o.estimate)) {
                ok = false;
                detail = "qubit " + std::to_string(q);
            }
        }
        report("weight1-decode", ok, detail);
    }

    return out;
}

} // namespace ppbf::verify
