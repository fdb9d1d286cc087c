#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppbf/code.hpp"
#include "ppbf/errors.hpp"
#include "ppbf/influence.hpp"
#include "ppbf/lattice.hpp"

namespace ppbf {

struct DecodeOutcome {
    BitVector estimate;
    BitVector residual_syndrome;
    int bf_flips = 0;
    int matching_rounds = 0;
    bool converged = false;
};

struct BfResult {
    BitVector estimate;
    BitVector residual;
    ProximityState state;
    int flips = 0;
};

// Serial bit flipping restricted to variables with two unsatisfied checks.
// Each flip satisfies both neighbors, so the syndrome weight drops by exactly
// two per step and termination is guaranteed.
inline BfResult preliminary_bf(const CodeModel& code, const InfluenceTemplate& tmpl,
                               const BitVector& s) {
    if (s.size() != static_cast<std::size_t>(code.m))
        throw invalid_parameter("preliminary_bf: syndrome length mismatch");

    BfResult out;
    out.state = compute_proximity_vector(tmpl, s);
    out.estimate = BitVector(code.n);

    std::vector<std::uint8_t> unsat(code.m, 0);
    std::vector<std::uint8_t> u(code.n, 0);
    int nunsat = 0;
    for (int i = 0; i < code.m; ++i)
        if (s.get(i)) {
            unsat[i] = 1;
            ++nunsat;
            for (std::int32_t q : code.check_adjacency[i]) ++u[q];
        }

    while (true) {
        int best = -1;
        for (int v = 0; v < code.n; ++v)
            if (u[v] == 2 && (best < 0 || out.state.nu[v] < out.state.nu[best])) best = v;
        if (best < 0) break;

        out.estimate.flip(best);
        std::vector<int> satisfied(code.variable_adjacency[best].begin(),
                                   code.variable_adjacency[best].end());
        for (int c : satisfied) {
            if (!unsat[c]) throw contract_error("bf flip touched a satisfied check");
            unsat[c] = 0;
            --nunsat;
            for (std::int32_t q : code.check_adjacency[c]) --u[q];
        }
        shift_and_remove(out.state, tmpl, satisfied);
        ++out.flips;
    }

    out.residual = BitVector(code.m);
    for (int i = 0; i < code.m; ++i)
        if (unsat[i]) out.residual.set(i, true);
    return out;
}

struct MatchStats {
    int rounds = 0;
    int boundary_matches = 0;
    int corner_rounds = 0;
};

namespace detail {

// Walk from a qubit at distance d back to the pivot along strictly
// decreasing alpha values. Qubits of one check differ in alpha by at most
// one, so the walk never revisits a check and the flipped set is a clean
// pivot-to-start path.
inline std::vector<int> alpha_descent_path(const CodeModel& code,
                                           const std::vector<std::int32_t>& alpha, int start) {
    std::vector<int> path{start};
    int cur = start;
    int d = alpha[start];
    while (d > 1) {
        int next = -1;
        for (std::int32_t c : code.variable_adjacency[cur])
            for (std::int32_t q : code.check_adjacency[c])
                if (alpha[q] == d - 1 && (next < 0 || q < next)) next = q;
        if (next < 0) throw contract_error("alpha descent found no predecessor");
        path.push_back(next);
        cur = next;
        --d;
    }
    return path;
}

// L-shaped toric path: horizontal along the pivot row, then vertical along
// the target column, using the canonical (shortest, tie-positive) offsets.
inline std::vector<int> toric_corner_path(int L, int pivot, int target) {
    namespace lat = lattice;
    const auto pi = lat::toric_check_coord(L, pivot);
    const auto pj = lat::toric_check_coord(L, target);
    const int sx = lat::toric_canonical_shift(pj.c - pi.c, L);
    const int sy = lat::toric_canonical_shift(pj.r - pi.r, L);

    std::vector<int> path;
    const int dx = sx >= 0 ? 1 : -1;
    for (int t = 0; t < (sx >= 0 ? sx : -sx); ++t) {
        const int col = pi.c + dx * t;
        path.push_back(dx > 0 ? lat::toric_h(L, pi.r, col) : lat::toric_h(L, pi.r, col - 1));
    }
    const int dy = sy >= 0 ? 1 : -1;
    for (int t = 0; t < (sy >= 0 ? sy : -sy); ++t) {
        const int row = pi.r + dy * t;
        path.push_back(dy > 0 ? lat::toric_v(L, row, pj.c) : lat::toric_v(L, row - 1, pj.c));
    }
    return path;
}

// One leg of a rotated-lattice path in diagonal coordinates. Returns false
// if any qubit on the leg falls outside the qubit grid.
inline bool rot_leg(int L, lattice::Diag from, int du, int dw, std::vector<int>& path) {
    namespace lat = lattice;
    const int steps = du != 0 ? (du > 0 ? du : -du) : (dw > 0 ? dw : -dw);
    const int su = du == 0 ? 0 : (du > 0 ? 1 : -1);
    const int sw = dw == 0 ? 0 : (dw > 0 ? 1 : -1);
    lat::Diag cur = from;
    for (int t = 0; t < steps; ++t) {
        lat::Diag next{cur.u + su, cur.w + sw};
        const lat::Diag lo{std::min(cur.u, next.u), std::min(cur.w, next.w)};
        const bool axis_u = su != 0;
        const int r = lat::rot_edge_qubit_r(lo, axis_u);
        const int c = lat::rot_edge_qubit_c(lo, axis_u);
        if (!lat::rot_qubit_valid(L, r, c)) return false;
        path.push_back(r * L + c);
        cur = next;
    }
    return true;
}

// L-shaped rotated path through a corner aligned with the pivot row and the
// target column; falls back to the transposed corner when the preferred one
// leaves the lattice.
inline bool rot_corner_path(int L, int pivot, int target, std::vector<int>& path) {
    namespace lat = lattice;
    const lat::Diag di = lat::face_to_diag(lat::rot_check_face(L, pivot));
    const lat::Diag dj = lat::face_to_diag(lat::rot_check_face(L, target));
    const int du = dj.u - di.u;
    const int dw = dj.w - di.w;

    path.clear();
    if (rot_leg(L, di, 0, dw, path) && rot_leg(L, lat::Diag{di.u, dj.w}, du, 0, path)) return true;
    path.clear();
    if (rot_leg(L, di, du, 0, path) && rot_leg(L, lat::Diag{dj.u, di.w}, 0, dw, path)) return true;
    path.clear();
    return false;
}

} // namespace detail

// Match unsatisfied checks in pairs, lowest proximity entry first, flipping
// one shortest connecting chain per round; on the rotated family a check may
// instead match to the nearer open boundary.
inline BitVector iterative_matching(const CodeModel& code, const InfluenceTemplate& tmpl,
                                    BitVector estimate, const BitVector& s_residual,
                                    ProximityState& state, MatchStats* stats = nullptr) {
    if (s_residual.size() != static_cast<std::size_t>(code.m))
        throw invalid_parameter("iterative_matching: syndrome length mismatch");

    std::vector<std::uint8_t> unsat(code.m, 0);
    int nunsat = 0;
    for (int i = 0; i < code.m; ++i)
        if (s_residual.get(i)) {
            unsat[i] = 1;
            ++nunsat;
        }

    const bool planar = code.family == Family::rotated_planar;
    MatchStats local;
    MatchStats& ms = stats ? *stats : local;

    auto apply_flips = [&](const std::vector<int>& qubits) {
        for (int q : qubits) {
            estimate.flip(q);
            for (std::int32_t c : code.variable_adjacency[q]) {
                unsat[c] ^= 1;
                nunsat += unsat[c] ? 1 : -1;
            }
        }
    };

    while (nunsat > 0) {
        // Pivot: unsatisfied check with the lowest proximity entry.
        int pivot = -1;
        for (int i = 0; i < code.m; ++i)
            if (unsat[i] && (pivot < 0 || state.gamma[i] < state.gamma[pivot])) pivot = i;

        const std::vector<std::int32_t> alpha_i = shift_alpha(tmpl, pivot);

        // Nearest unsatisfied partner; ties by proximity entry, then label.
        int target = -1, delta = 0;
        for (int j = 0; j < code.m; ++j) {
            if (!unsat[j] || j == pivot) continue;
            int dj = 0;
            for (std::int32_t q : code.check_adjacency[j])
                if (alpha_i[q] > 0 && (dj == 0 || alpha_i[q] < dj)) dj = alpha_i[q];
            if (dj == 0) continue; // beyond depth D
            if (target < 0 || dj < delta ||
                (dj == delta && (state.gamma[j] < state.gamma[target] ||
                                 (state.gamma[j] == state.gamma[target] && j < target))))
                target = j, delta = dj;
        }

        // Boundary pseudo-target: nearest chain to a side column.
        int bq = -1, bdelta = 0;
        if (planar) {
            for (int q = 0; q < code.n; ++q)
                if (code.boundary_distance[q] == 1 && alpha_i[q] > 0)
                    if (bq < 0 || alpha_i[q] < bdelta) {
                        bq = q;
                        bdelta = alpha_i[q];
                    }
        }

        if (target < 0 && bq < 0)
            throw config_error("no matching target within influence depth D=" +
                               std::to_string(tmpl.D));

        const int before = nunsat;
        if (target >= 0 && (bq < 0 || delta <= bdelta)) {
            const std::vector<std::int32_t> alpha_j = shift_alpha(tmpl, target);
            std::vector<int> on_path;
            for (int k = 0; k < code.n; ++k)
                if (alpha_i[k] > 0 && alpha_j[k] > 0 && alpha_i[k] + alpha_j[k] == delta + 1)
                    on_path.push_back(k);

            std::vector<int> flips;
            if (static_cast<int>(on_path.size()) == delta) {
                flips = on_path; // unique shortest chain
            } else {
                ++ms.corner_rounds;
                if (code.family == Family::toric) {
                    flips = detail::toric_corner_path(code.L, pivot, target);
                } else if (!detail::rot_corner_path(code.L, pivot, target, flips)) {
                    // Both corners leave the lattice; take one real geodesic.
                    int start = -1;
                    for (std::int32_t q : code.check_adjacency[target])
                        if (alpha_i[q] == delta && (start < 0 || q < start)) start = q;
                    flips = detail::alpha_descent_path(code, alpha_i, start);
                }
            }
            apply_flips(flips);
            if (unsat[pivot] || unsat[target] || nunsat != before - 2)
                throw contract_error("matching round did not clear exactly the matched pair");
            shift_and_remove(state, tmpl, {pivot, target});
        } else {
            const auto flips = detail::alpha_descent_path(code, alpha_i, bq);
            apply_flips(flips);
            if (unsat[pivot] || nunsat != before - 1)
                throw contract_error("boundary match did not clear exactly the pivot");
            shift_and_remove(state, tmpl, {pivot});
            ++ms.boundary_matches;
        }
        ++ms.rounds;
    }
    return estimate;
}

// Full decode: proximity vectors, preliminary BF, then iterative matching.
// Always converges (the matching loop clears every residual check) unless
// the influence depth is too small for the syndrome, which raises.
inline DecodeOutcome ppbf_decode(const CodeModel& code, const InfluenceTemplate& tmpl,
                                 const BitVector& s) {
    if (tmpl.family != code.family || tmpl.L != code.L)
        throw invalid_parameter("template does not match the code");
    // Valid toric syndromes are exactly the even-weight vectors (one check
    // relation). Catch invalid input here rather than deep in the matcher.
    if (code.family == Family::toric && s.weight() % 2 != 0)
        throw invalid_parameter("toric syndrome weight must be even");
    BfResult bf = preliminary_bf(code, tmpl, s);

    DecodeOutcome out;
    out.bf_flips = bf.flips;
    MatchStats ms;
    out.estimate = iterative_matching(code, tmpl, std::move(bf.estimate), bf.residual, bf.state, &ms);
    out.matching_rounds = ms.rounds;
    out.residual_syndrome = syndrome(code, out.estimate) ^ s;
    out.converged = out.residual_syndrome.is_zero();
    return out;
}

// Baseline: flip every variable with two unsatisfied checks, all at once,
// for at most max_iters sweeps. Non-convergence is an outcome, not an error.
inline DecodeOutcome classical_bf_decode(const CodeModel& code, const BitVector& s,
                                         int max_iters = 100) {
    if (s.size() != static_cast<std::size_t>(code.m))
        throw invalid_parameter("classical_bf_decode: syndrome length mismatch");

    DecodeOutcome out;
    out.estimate = BitVector(code.n);
    BitVector cur = s;

    for (int it = 0; it < max_iters && !cur.is_zero(); ++it) {
        std::vector<std::uint8_t> u(code.n, 0);
        for (int i = 0; i < code.m; ++i)
            if (cur.get(i))
                for (std::int32_t q : code.check_adjacency[i]) ++u[q];
        std::vector<int> flips;
        for (int v = 0; v < code.n; ++v)
            if (u[v] == 2) flips.push_back(v);
        if (flips.empty()) break;
        for (int v : flips) {
            out.estimate.flip(v);
            for (std::int32_t c : code.variable_adjacency[v]) cur.flip(c);
        }
        out.bf_flips += static_cast<int>(flips.size());
    }
    out.residual_syndrome = cur;
    out.converged = cur.is_zero();
    return out;
}

} // namespace ppbf
