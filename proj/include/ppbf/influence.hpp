#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ppbf/code.hpp"
#include "ppbf/errors.hpp"
#include "ppbf/lattice.hpp"

namespace ppbf {

// Influence of one reference check, computed offline on a translation-
// invariant lattice, together with the label maps that move it onto any
// check of the decoded code by pure index arithmetic.
//
// The toric code is its own influence lattice and shifts are cyclic. The
// rotated planar code is embedded in a larger bulk grid (diagonal frame,
// margins wide enough that no depth-D walk from any mapped check can see
// the grid edge); values shifted outside the image of the label maps are
// discarded on readback.
struct InfluenceTemplate {
    Family family{};
    int L = 0;
    int D = 0;

    int embed_rows = 0; // check rows of the influence lattice
    int embed_cols = 0; // checks per row
    int ref_check = 0;  // embedding label of the reference check
    int rho_c = 0;      // checks per embedding row
    int rho_vo = 0;     // variables per odd embedding row
    int rho_ve = 0;     // variables per even embedding row

    std::vector<std::int64_t> gamma_ref; // over embedding checks
    std::vector<std::int64_t> nu_ref;    // over embedding variables
    std::vector<std::int32_t> alpha_ref; // truncated distances from the reference

    std::vector<std::int32_t> phi_c; // code check label -> embedding label
    std::vector<std::int32_t> phi_v; // code variable label -> embedding label

    // Rotated family only: truncated distances measured on the decoded code
    // itself, one row per check. Open boundaries make these differ from the
    // shifted bulk distances, and the matching step needs the real ones.
    std::vector<std::int32_t> alpha_rows;

    int code_checks = 0;
    int code_vars = 0;
};

// Live proximity vectors during one decode. Entries stay nonnegative:
// everything ever added is an entrywise-identical shifted template copy,
// so removal is exact.
struct ProximityState {
    std::vector<std::int64_t> nu;    // per code variable
    std::vector<std::int64_t> gamma; // per code check
};

namespace detail {

inline std::int64_t checked_add64(std::int64_t a, std::int64_t b, int depth) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw ppbf::overflow_error("influence recursion overflowed at depth " +
                                   std::to_string(depth));
    return out;
}

struct EmbedGraph {
    std::vector<std::vector<std::int32_t>> check_adj;
    std::vector<std::vector<std::int32_t>> var_adj;
};

inline EmbedGraph toric_embed_graph(int L) {
    namespace lat = lattice;
    EmbedGraph g;
    g.check_adj.resize(L * L);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c)
            g.check_adj[lat::toric_check(L, r, c)] = {
                static_cast<std::int32_t>(lat::toric_h(L, r, c)),
                static_cast<std::int32_t>(lat::toric_h(L, r, c - 1)),
                static_cast<std::int32_t>(lat::toric_v(L, r, c)),
                static_cast<std::int32_t>(lat::toric_v(L, r - 1, c))};
    g.var_adj.resize(2 * L * L);
    for (std::size_t i = 0; i < g.check_adj.size(); ++i)
        for (std::int32_t q : g.check_adj[i]) g.var_adj[q].push_back(static_cast<std::int32_t>(i));
    return g;
}

inline EmbedGraph bulk_embed_graph(const lattice::Bulk& bk) {
    EmbedGraph g;
    g.check_adj.resize(bk.num_checks());
    for (int a = 0; a < bk.R; ++a)
        for (int b = 0; b < bk.C; ++b) {
            auto& row = g.check_adj[bk.check(a, b)];
            if (bk.h_in_range(a, b - 1)) row.push_back(bk.h_edge(a, b - 1));
            if (bk.h_in_range(a, b)) row.push_back(bk.h_edge(a, b));
            if (bk.v_in_range(a - 1, b)) row.push_back(bk.v_edge(a - 1, b));
            if (bk.v_in_range(a, b)) row.push_back(bk.v_edge(a, b));
        }
    g.var_adj.resize(bk.num_vars());
    for (std::size_t i = 0; i < g.check_adj.size(); ++i)
        for (std::int32_t q : g.check_adj[i]) g.var_adj[q].push_back(static_cast<std::int32_t>(i));
    return g;
}

inline void run_recursion(const EmbedGraph& g, int ref, int depth,
                          std::vector<std::int64_t>& gamma, std::vector<std::int64_t>& nu) {
    gamma.assign(g.check_adj.size(), 0);
    nu.assign(g.var_adj.size(), 0);
    gamma[ref] = 1;
    for (std::int32_t q : g.check_adj[ref]) nu[q] = 1;
    std::vector<std::int64_t> g2(gamma.size()), v2(nu.size());
    for (int l = 1; l <= depth; ++l) {
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            std::int64_t acc = 0;
            for (std::int32_t q : g.check_adj[i]) acc = checked_add64(acc, nu[q], l);
            g2[i] = acc;
        }
        for (std::size_t q = 0; q < nu.size(); ++q) {
            std::int64_t acc = 0;
            for (std::int32_t i : g.var_adj[q]) acc = checked_add64(acc, g2[i], l);
            v2[q] = acc;
        }
        gamma.swap(g2);
        nu.swap(v2);
    }
}

inline std::vector<std::int32_t> truncated_bfs(const EmbedGraph& g, int ref, int cap) {
    std::vector<std::int32_t> dist(g.var_adj.size(), 0);
    std::deque<int> frontier;
    for (std::int32_t q : g.check_adj[ref]) {
        dist[q] = 1;
        frontier.push_back(q);
    }
    while (!frontier.empty()) {
        const int q = frontier.front();
        frontier.pop_front();
        if (dist[q] >= cap) continue;
        for (std::int32_t c : g.var_adj[q])
            for (std::int32_t nb : g.check_adj[c])
                if (dist[nb] == 0) {
                    dist[nb] = dist[q] + 1;
                    frontier.push_back(nb);
                }
    }
    return dist;
}

} // namespace detail

// Margin of bulk lattice around the embedded rotated code. One extra cell
// beyond the depth-D+1 influence ball keeps every reachable walk interior.
inline int bulk_margin(int D) { return D + 2; }

inline lattice::Bulk bulk_for(int L, int D) {
    const int M = bulk_margin(D);
    return lattice::Bulk{(L - 1) + 2 * M, L + 2 * M};
}

inline InfluenceTemplate build_template(Family family, int L, int D) {
    if (D < 1) throw invalid_parameter("influence depth must be >= 1, got " + std::to_string(D));

    InfluenceTemplate t;
    t.family = family;
    t.L = L;
    t.D = D;

    if (family == Family::toric) {
        if (L < 2) throw invalid_parameter("toric code needs L >= 2");
        const auto g = detail::toric_embed_graph(L);
        t.embed_rows = L;
        t.embed_cols = L;
        t.rho_c = L;
        t.rho_vo = L;
        t.rho_ve = L;
        t.code_checks = L * L;
        t.code_vars = 2 * L * L;
        t.ref_check = lattice::toric_check(L, L / 2, L / 2);
        detail::run_recursion(g, t.ref_check, D, t.gamma_ref, t.nu_ref);
        t.alpha_ref = detail::truncated_bfs(g, t.ref_check, D);
        t.phi_c.resize(t.code_checks);
        for (int j = 0; j < t.code_checks; ++j) t.phi_c[j] = j;
        t.phi_v.resize(t.code_vars);
        for (int q = 0; q < t.code_vars; ++q) t.phi_v[q] = q;
    } else {
        if (L < 3 || L % 2 == 0) throw invalid_parameter("rotated planar code needs odd L >= 3");
        namespace lat = lattice;
        const lat::Bulk bk = bulk_for(L, D);
        const auto g = detail::bulk_embed_graph(bk);
        const int M = bulk_margin(D);
        const int off_a = M - 1;            // smallest code diagonal row is u = 1
        const int off_b = M + (L - 1) / 2;  // smallest code diagonal column is w = -(L-1)/2

        t.embed_rows = bk.R;
        t.embed_cols = bk.C;
        t.rho_c = bk.C;
        t.rho_vo = bk.C;     // odd variable rows hold the v edges
        t.rho_ve = bk.C - 1; // even variable rows hold the h edges
        t.code_checks = lat::rot_num_checks(L);
        t.code_vars = L * L;

        t.phi_c.resize(t.code_checks);
        for (int j = 0; j < t.code_checks; ++j) {
            const lat::Diag d = lat::face_to_diag(lat::rot_check_face(L, j));
            const int a = d.u + off_a, b = d.w + off_b;
            if (!bk.check_in_range(a, b)) throw contract_error("phi_c maps outside the bulk grid");
            t.phi_c[j] = bk.check(a, b);
        }
        t.phi_v.resize(t.code_vars);
        for (int r = 0; r < L; ++r)
            for (int c = 0; c < L; ++c) {
                const lat::QubitEdge e = lat::rot_qubit_edge(r, c);
                const int a = e.lo.u + off_a, b = e.lo.w + off_b;
                if (e.axis_u) {
                    if (!bk.v_in_range(a, b)) throw contract_error("phi_v maps outside the bulk grid");
                    t.phi_v[r * L + c] = bk.v_edge(a, b);
                } else {
                    if (!bk.h_in_range(a, b)) throw contract_error("phi_v maps outside the bulk grid");
                    t.phi_v[r * L + c] = bk.h_edge(a, b);
                }
            }

        // Reference: a central code check. Its depth-D ball, and that of any
        // other mapped check, sits strictly inside the bulk grid.
        t.ref_check = t.phi_c[t.code_checks / 2];
        detail::run_recursion(g, t.ref_check, D, t.gamma_ref, t.nu_ref);
        t.alpha_ref = detail::truncated_bfs(g, t.ref_check, D);

        // Real code distances for the matching step, one BFS per check.
        const CodeModel code = build_rotated_planar(L);
        t.alpha_rows.assign(static_cast<std::size_t>(t.code_checks) * t.code_vars, 0);
        for (int j = 0; j < t.code_checks; ++j) {
            std::deque<int> frontier;
            auto* row = &t.alpha_rows[static_cast<std::size_t>(j) * t.code_vars];
            for (std::int32_t q : code.check_adjacency[j]) {
                row[q] = 1;
                frontier.push_back(q);
            }
            while (!frontier.empty()) {
                const int q = frontier.front();
                frontier.pop_front();
                if (row[q] >= D) continue;
                for (std::int32_t chk : code.variable_adjacency[q])
                    for (std::int32_t nb : code.check_adjacency[chk])
                        if (row[nb] == 0) {
                            row[nb] = row[q] + 1;
                            frontier.push_back(nb);
                        }
            }
        }
    }

    // A whole syndrome may sum one influence per check; the accumulated
    // vectors must stay inside the 63-bit range.
    std::int64_t peak = 0;
    for (std::int64_t v : t.gamma_ref) peak = std::max(peak, v);
    for (std::int64_t v : t.nu_ref) peak = std::max(peak, v);
    if (peak > 0 && peak > std::numeric_limits<std::int64_t>::max() / (t.code_checks + 1))
        throw overflow_error("influence template too large to accumulate at depth " +
                             std::to_string(D));
    return t;
}

// Horizontal and vertical lattice offsets between two embedded checks.
struct Shift {
    int sx = 0, sy = 0;
};

inline Shift shift_between(const InfluenceTemplate& t, int j) {
    if (j < 0 || j >= t.code_checks) throw invalid_parameter("check label out of range");
    const int pc = t.phi_c[j];
    return {pc % t.rho_c - t.ref_check % t.rho_c, pc / t.rho_c - t.ref_check / t.rho_c};
}

namespace detail {

// Readback of a shifted template entry for one embedding position.
// Returns -1 when the source falls off the influence lattice.
inline int bulk_unshift_check(const InfluenceTemplate& t, int pos, Shift s) {
    const int row = pos / t.embed_cols - s.sy;
    const int col = pos % t.embed_cols - s.sx;
    if (row < 0 || row >= t.embed_rows || col < 0 || col >= t.embed_cols) return -1;
    return row * t.embed_cols + col;
}

inline int bulk_unshift_var(const InfluenceTemplate& t, int pos, Shift s) {
    const int stride = 2 * t.embed_cols - 1;
    const int vrow = pos / stride;
    const int rem = pos % stride;
    const int hw = t.embed_cols - 1; // h edges per row
    const int row = vrow - s.sy;
    if (rem < hw) {
        const int col = rem - s.sx;
        if (row < 0 || row >= t.embed_rows || col < 0 || col >= hw) return -1;
        return row * stride + col;
    }
    const int col = rem - hw - s.sx;
    if (row < 0 || row >= t.embed_rows - 1 || col < 0 || col >= t.embed_cols) return -1;
    return row * stride + hw + col;
}

inline int toric_unshift_check(int L, int pos, Shift s) {
    namespace lat = lattice;
    const int row = lat::tor_mod(pos / L - s.sy, L);
    const int col = lat::tor_mod(pos % L - s.sx, L);
    return row * L + col;
}

inline int toric_unshift_var(int L, int pos, Shift s) {
    namespace lat = lattice;
    const int row = lat::tor_mod(pos / L - 2 * s.sy, 2 * L);
    const int col = lat::tor_mod(pos % L - s.sx, L);
    return row * L + col;
}

} // namespace detail

// Influence of check j in code labels, by cyclic relabeling of the stored
// reference influence.
inline std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> shift_influence_toric(
    const InfluenceTemplate& t, int j) {
    if (t.family != Family::toric) throw invalid_parameter("toric shift on non-toric template");
    const Shift s = shift_between(t, j);
    std::vector<std::int64_t> gamma(t.code_checks), nu(t.code_vars);
    for (int p = 0; p < t.code_checks; ++p)
        gamma[p] = t.gamma_ref[detail::toric_unshift_check(t.L, p, s)];
    for (int q = 0; q < t.code_vars; ++q)
        nu[q] = t.nu_ref[detail::toric_unshift_var(t.L, q, s)];
    return {std::move(gamma), std::move(nu)};
}

// Influence of check j in code labels; entries whose source position falls
// off the influence lattice read as zero.
inline std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> shift_influence(
    const InfluenceTemplate& t, int j) {
    if (t.family == Family::toric) return shift_influence_toric(t, j);
    const Shift s = shift_between(t, j);
    std::vector<std::int64_t> gamma(t.code_checks), nu(t.code_vars);
    for (int p = 0; p < t.code_checks; ++p) {
        const int src = detail::bulk_unshift_check(t, t.phi_c[p], s);
        gamma[p] = src < 0 ? 0 : t.gamma_ref[src];
    }
    for (int q = 0; q < t.code_vars; ++q) {
        const int src = detail::bulk_unshift_var(t, t.phi_v[q], s);
        nu[q] = src < 0 ? 0 : t.nu_ref[src];
    }
    return {std::move(gamma), std::move(nu)};
}

// Truncated distances from check j to every variable of the code.
inline std::vector<std::int32_t> shift_alpha(const InfluenceTemplate& t, int j) {
    if (j < 0 || j >= t.code_checks) throw invalid_parameter("check label out of range");
    std::vector<std::int32_t> alpha(t.code_vars);
    if (t.family == Family::toric) {
        const Shift s = shift_between(t, j);
        for (int q = 0; q < t.code_vars; ++q)
            alpha[q] = t.alpha_ref[detail::toric_unshift_var(t.L, q, s)];
    } else {
        const auto* row = &t.alpha_rows[static_cast<std::size_t>(j) * t.code_vars];
        std::copy(row, row + t.code_vars, alpha.begin());
    }
    return alpha;
}

namespace detail {

// Accumulate sign * influence(j) into the state without materializing it.
inline void accumulate_shifted(ProximityState& st, const InfluenceTemplate& t, int j, int sign) {
    const Shift s = shift_between(t, j);
    if (t.family == Family::toric) {
        for (int p = 0; p < t.code_checks; ++p) {
            st.gamma[p] += sign * t.gamma_ref[toric_unshift_check(t.L, p, s)];
            if (st.gamma[p] < 0) throw contract_error("proximity gamma went negative");
        }
        for (int q = 0; q < t.code_vars; ++q) {
            st.nu[q] += sign * t.nu_ref[toric_unshift_var(t.L, q, s)];
            if (st.nu[q] < 0) throw contract_error("proximity nu went negative");
        }
        return;
    }
    for (int p = 0; p < t.code_checks; ++p) {
        const int src = bulk_unshift_check(t, t.phi_c[p], s);
        if (src >= 0) {
            st.gamma[p] += sign * t.gamma_ref[src];
            if (st.gamma[p] < 0) throw contract_error("proximity gamma went negative");
        }
    }
    for (int q = 0; q < t.code_vars; ++q) {
        const int src = bulk_unshift_var(t, t.phi_v[q], s);
        if (src >= 0) {
            st.nu[q] += sign * t.nu_ref[src];
            if (st.nu[q] < 0) throw contract_error("proximity nu went negative");
        }
    }
}

} // namespace detail

// Entrywise sum of the shifted influences of all unsatisfied checks.
inline ProximityState compute_proximity_vector(const InfluenceTemplate& t, const BitVector& s) {
    if (s.size() != static_cast<std::size_t>(t.code_checks))
        throw invalid_parameter("syndrome length does not match the template");
    ProximityState st;
    st.nu.assign(t.code_vars, 0);
    st.gamma.assign(t.code_checks, 0);
    for (int j = 0; j < t.code_checks; ++j)
        if (s.get(j)) detail::accumulate_shifted(st, t, j, +1);
    return st;
}

// Remove the influences of checks that just became satisfied. Exact because
// every contribution is an identical shifted copy of one template.
inline void shift_and_remove(ProximityState& st, const InfluenceTemplate& t,
                             const std::vector<int>& satisfied) {
    for (int c : satisfied) detail::accumulate_shifted(st, t, c, -1);
}

} // namespace ppbf
