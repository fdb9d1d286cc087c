#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ppbf/bitvec.hpp"
#include "ppbf/code.hpp"
#include "ppbf/errors.hpp"

// Brute-force reference implementations for the property suite. Nothing here
// is shared with the fast paths it checks: dense matrices, plain traversals,
// exhaustive enumeration. Performance is a non-goal.
namespace ppbf::oracle {

struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<std::uint8_t> bits; // row-major

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, 0) {}

    std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c]; }
    void set(int r, int c, std::uint8_t v) { bits[static_cast<std::size_t>(r) * cols + c] = v; }
};

inline DenseMatrix densify(const std::vector<std::vector<std::int32_t>>& rows, int ncols) {
    DenseMatrix h(static_cast<int>(rows.size()), ncols);
    for (int i = 0; i < h.rows; ++i)
        for (std::int32_t j : rows[i]) h.set(i, j, 1);
    return h;
}

struct InfluencePair {
    std::vector<std::int64_t> gamma; // per check
    std::vector<std::int64_t> nu;    // per variable
};

namespace detail {
inline std::int64_t checked_add(std::int64_t a, std::int64_t b, int depth) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw ppbf::overflow_error("influence recursion overflowed at depth " + std::to_string(depth));
    return out;
}
} // namespace detail

// gamma^(0) = seed, nu^(0) = gamma^(0) H, then D rounds of
// gamma <- nu H^T, nu <- gamma H, all in exact integer arithmetic.
inline InfluencePair recursive_influence_direct(const DenseMatrix& h, const BitVector& seed, int depth) {
    if (depth < 0) throw invalid_parameter("influence depth must be >= 0");
    if (seed.size() != static_cast<std::size_t>(h.rows))
        throw invalid_parameter("seed length does not match check count");

    InfluencePair out;
    out.gamma.assign(h.rows, 0);
    out.nu.assign(h.cols, 0);
    for (int i = 0; i < h.rows; ++i) out.gamma[i] = seed.get(i) ? 1 : 0;
    for (int j = 0; j < h.cols; ++j) {
        std::int64_t acc = 0;
        for (int i = 0; i < h.rows; ++i)
            if (h.at(i, j)) acc = detail::checked_add(acc, out.gamma[i], 0);
        out.nu[j] = acc;
    }
    for (int l = 1; l <= depth; ++l) {
        std::vector<std::int64_t> g(h.rows, 0);
        for (int i = 0; i < h.rows; ++i) {
            std::int64_t acc = 0;
            for (int j = 0; j < h.cols; ++j)
                if (h.at(i, j)) acc = detail::checked_add(acc, out.nu[j], l);
            g[i] = acc;
        }
        std::vector<std::int64_t> v(h.cols, 0);
        for (int j = 0; j < h.cols; ++j) {
            std::int64_t acc = 0;
            for (int i = 0; i < h.rows; ++i)
                if (h.at(i, j)) acc = detail::checked_add(acc, g[i], l);
            v[j] = acc;
        }
        out.gamma.swap(g);
        out.nu.swap(v);
    }
    return out;
}

// Qubit-inclusive shortest-path lengths from check j to every variable,
// truncated to `cap` (0 beyond the cap).
inline std::vector<std::int32_t> bfs_distances(const CodeModel& code, int j, int cap) {
    if (j < 0 || j >= code.m) throw invalid_parameter("bfs_distances: check label out of range");
    std::vector<std::int32_t> dist(code.n, 0);
    std::deque<int> frontier;
    for (std::int32_t q : code.check_adjacency[j]) {
        dist[q] = 1;
        frontier.push_back(q);
    }
    while (!frontier.empty()) {
        const int q = frontier.front();
        frontier.pop_front();
        if (dist[q] >= cap) continue;
        for (std::int32_t c : code.variable_adjacency[q])
            for (std::int32_t nb : code.check_adjacency[c])
                if (dist[nb] == 0) {
                    dist[nb] = dist[q] + 1;
                    frontier.push_back(nb);
                }
    }
    return dist;
}

// Least-weight error reproducing syndrome s, lexicographically least among
// minimum-weight solutions; nullopt if none exists within w_max.
inline std::optional<BitVector> exhaustive_min_weight_decode(const CodeModel& code,
                                                             const BitVector& s, int w_max) {
    if (s.size() != static_cast<std::size_t>(code.m))
        throw invalid_parameter("exhaustive decode: syndrome length mismatch");
    const int n = code.n;
    const BitVector& target = s;

    // Enumerate index combinations of fixed weight in lexicographic order.
    auto search = [&](int w) -> std::optional<BitVector> {
        std::vector<int> idx(w);
        for (int i = 0; i < w; ++i) idx[i] = i;
        while (true) {
            BitVector e(n);
            for (int i : idx) e.set(i, true);
            if (syndrome(code, e) == target) return e;
            int k = w - 1;
            while (k >= 0 && idx[k] == n - w + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int t = k + 1; t < w; ++t) idx[t] = idx[t - 1] + 1;
        }
        return std::nullopt;
    };

    if (target.is_zero()) return BitVector(n);
    for (int w = 1; w <= w_max; ++w)
        if (auto hit = search(w)) return hit;
    return std::nullopt;
}

// Qubit-inclusive shortest-path lengths on an arbitrary dense check matrix.
inline std::vector<std::int32_t> bfs_distances_dense(const DenseMatrix& h, int seed_check) {
    std::vector<std::vector<int>> var_checks(h.cols);
    for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.cols; ++j)
            if (h.at(i, j)) var_checks[j].push_back(i);

    std::vector<std::int32_t> dist(h.cols, 0);
    std::deque<int> frontier;
    for (int j = 0; j < h.cols; ++j)
        if (h.at(seed_check, j)) {
            dist[j] = 1;
            frontier.push_back(j);
        }
    while (!frontier.empty()) {
        const int q = frontier.front();
        frontier.pop_front();
        for (int c : var_checks[q])
            for (int j = 0; j < h.cols; ++j)
                if (h.at(c, j) && dist[j] == 0) {
                    dist[j] = dist[q] + 1;
                    frontier.push_back(j);
                }
    }
    return dist;
}

// Rank over GF(2) by Gaussian elimination on dense rows.
inline int gf2_rank(DenseMatrix h) {
    int rank = 0;
    for (int col = 0; col < h.cols && rank < h.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < h.rows; ++r)
            if (h.at(r, col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < h.cols; ++c) {
            const auto tmp = h.at(rank, c);
            h.set(rank, c, h.at(pivot, c));
            h.set(pivot, c, tmp);
        }
        for (int r = 0; r < h.rows; ++r)
            if (r != rank && h.at(r, col))
                for (int c = col; c < h.cols; ++c) h.set(r, c, h.at(r, c) ^ h.at(rank, c));
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Independent bulk patch for checking the shift engine on the rotated family.
// Built in the original frame: a G x G qubit grid carrying a check on every
// even-colored face, with the decoded code placed at offset (margin, margin).
// All positions the shift engine can reach sit deep in the interior.
// ---------------------------------------------------------------------------
struct BulkPatch {
    int G = 0;      // qubit grid side
    int margin = 0; // face-coordinate offset of the embedded code
    DenseMatrix h;  // checks x qubits
    std::vector<int> check_of_face; // (G+1)*(G+1) face grid, -1 where no check
    int num_checks = 0;
};

inline BulkPatch build_bulk_patch(int L, int margin) {
    BulkPatch p;
    p.G = L + 2 * margin;
    p.margin = margin;
    const int F = p.G + 1;
    p.check_of_face.assign(static_cast<std::size_t>(F) * F, -1);
    std::vector<std::vector<std::int32_t>> rows;
    for (int fr = 0; fr < F; ++fr)
        for (int fc = 0; fc < F; ++fc) {
            if (((fr + fc) & 1) != 0) continue;
            std::vector<std::int32_t> q;
            for (int r = fr - 1; r <= fr; ++r)
                for (int c = fc - 1; c <= fc; ++c)
                    if (r >= 0 && r < p.G && c >= 0 && c < p.G) q.push_back(r * p.G + c);
            if (q.empty()) continue;
            p.check_of_face[static_cast<std::size_t>(fr) * F + fc] = static_cast<int>(rows.size());
            rows.push_back(std::move(q));
        }
    p.num_checks = static_cast<int>(rows.size());
    p.h = densify(rows, p.G * p.G);
    return p;
}

inline int bulk_check_for(const BulkPatch& p, int fr, int fc) {
    const int F = p.G + 1;
    const int id = p.check_of_face[static_cast<std::size_t>(fr + p.margin) * F + (fc + p.margin)];
    if (id < 0) throw contract_error("bulk patch: no check at requested face");
    return id;
}

inline int bulk_qubit_for(const BulkPatch& p, int r, int c) {
    return (r + p.margin) * p.G + (c + p.margin);
}

} // namespace ppbf::oracle
