#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "ppbf/bitvec.hpp"
#include "ppbf/errors.hpp"
#include "ppbf/lattice.hpp"

namespace ppbf {

enum class Family { toric, rotated_planar };

inline const char* family_name(Family f) {
    return f == Family::toric ? "toric" : "rotated-planar";
}

// One surface code instance over the bit-flip channel: the check/variable
// adjacency of the decoding matrix H, logical operator representatives for
// both sectors, and boundary data. Immutable after construction.
struct CodeModel {
    Family family{};
    int L = 0;
    int n = 0; // variable nodes (qubits)
    int m = 0; // check nodes

    std::vector<std::vector<std::int32_t>> check_adjacency;    // rows of H
    std::vector<std::vector<std::int32_t>> variable_adjacency; // columns of H

    // Supports that commute with every row of H but are outside the dual row
    // space; one per encoded qubit.
    std::vector<BitVector> logical_representatives;

    // Representatives of the opposite sector, used to classify residuals.
    std::vector<BitVector> dual_logical_representatives;

    // Rows of the dual-sector matrix; adding any combination of these to an
    // estimate leaves both the syndrome and the failure verdict unchanged.
    std::vector<std::vector<std::int32_t>> dual_checks;

    // Qubit-inclusive hops to the nearest open boundary, or -1 on the torus.
    std::vector<std::int32_t> boundary_distance;

    int rho_c = 0;  // checks per lattice row
    int rho_vo = 0; // variables per odd row
    int rho_ve = 0; // variables per even row
};

namespace detail {

inline void sort_adjacency(std::vector<std::vector<std::int32_t>>& adj) {
    for (auto& row : adj) std::sort(row.begin(), row.end());
}

inline std::vector<std::vector<std::int32_t>> transpose_adjacency(
    const std::vector<std::vector<std::int32_t>>& rows, int ncols) {
    std::vector<std::vector<std::int32_t>> cols(ncols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::int32_t j : rows[i]) cols[j].push_back(static_cast<std::int32_t>(i));
    return cols;
}

inline BitVector row_syndrome(const std::vector<std::vector<std::int32_t>>& rows,
                              const BitVector& e) {
    BitVector s(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool acc = false;
        for (std::int32_t j : rows[i]) acc ^= e.get(static_cast<std::size_t>(j));
        s.set(i, acc);
    }
    return s;
}

// Construction-time sanity: logicals lie in ker H and pair symplectically
// with the dual representatives, which certifies they are not stabilizers.
inline void validate_model(const CodeModel& code) {
    for (const auto& rep : code.logical_representatives)
        if (!row_syndrome(code.check_adjacency, rep).is_zero())
            throw contract_error("logical representative has nonzero syndrome");
    for (const auto& rep : code.dual_logical_representatives)
        if (!row_syndrome(code.dual_checks, rep).is_zero())
            throw contract_error("dual representative has nonzero dual syndrome");
    const std::size_t k = code.logical_representatives.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const bool pair = code.logical_representatives[i].dot(code.dual_logical_representatives[j]);
            if (pair != (i == j)) throw contract_error("logical pairing matrix is not identity");
        }
    // Dual rows must commute with H rows (shared support even).
    for (const auto& drow : code.dual_checks) {
        BitVector d(code.n);
        for (std::int32_t q : drow) d.set(q, true);
        if (!row_syndrome(code.check_adjacency, d).is_zero())
            throw contract_error("dual check anticommutes with a primal check");
    }
}

} // namespace detail

// Vertex-edge incidence of the L x L periodic lattice. Two logical
// representatives: one horizontal and one vertical non-contractible cycle.
inline CodeModel build_toric(int L) {
    if (L < 2) throw invalid_parameter("toric code needs L >= 2, got " + std::to_string(L));
    namespace lat = lattice;

    CodeModel code;
    code.family = Family::toric;
    code.L = L;
    code.n = 2 * L * L;
    code.m = L * L;
    code.rho_c = L;
    code.rho_vo = L;
    code.rho_ve = L;

    code.check_adjacency.resize(code.m);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
            auto& row = code.check_adjacency[lat::toric_check(L, r, c)];
            row = {static_cast<std::int32_t>(lat::toric_h(L, r, c)),
                   static_cast<std::int32_t>(lat::toric_h(L, r, c - 1)),
                   static_cast<std::int32_t>(lat::toric_v(L, r, c)),
                   static_cast<std::int32_t>(lat::toric_v(L, r - 1, c))};
        }
    detail::sort_adjacency(code.check_adjacency);
    code.variable_adjacency = detail::transpose_adjacency(code.check_adjacency, code.n);

    // Faces of the lattice are the dual checks.
    code.dual_checks.resize(code.m);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
            auto& row = code.dual_checks[lat::toric_check(L, r, c)];
            row = {static_cast<std::int32_t>(lat::toric_h(L, r, c)),
                   static_cast<std::int32_t>(lat::toric_h(L, r + 1, c)),
                   static_cast<std::int32_t>(lat::toric_v(L, r, c)),
                   static_cast<std::int32_t>(lat::toric_v(L, r, c + 1))};
        }
    detail::sort_adjacency(code.dual_checks);

    BitVector horiz(code.n), vert(code.n);
    for (int c = 0; c < L; ++c) horiz.set(lat::toric_h(L, 0, c), true);
    for (int r = 0; r < L; ++r) vert.set(lat::toric_v(L, r, 0), true);
    code.logical_representatives = {horiz, vert};

    // Duals: a column of horizontal edges crosses `horiz` once, a row of
    // vertical edges crosses `vert` once.
    BitVector dual_h(code.n), dual_v(code.n);
    for (int r = 0; r < L; ++r) dual_h.set(lat::toric_h(L, r, 0), true);
    for (int c = 0; c < L; ++c) dual_v.set(lat::toric_v(L, 0, c), true);
    code.dual_logical_representatives = {dual_h, dual_v};

    code.boundary_distance.assign(code.n, -1);

    detail::validate_model(code);
    return code;
}

// Rotated planar code, odd L >= 3: L^2 qubits, (L^2-1)/2 checks on the
// even-colored faces with two-qubit rows at the top and bottom. The dual
// sector lives on the odd-colored faces with side half-checks.
inline CodeModel build_rotated_planar(int L) {
    if (L < 3 || L % 2 == 0)
        throw invalid_parameter("rotated planar code needs odd L >= 3, got " + std::to_string(L));
    namespace lat = lattice;

    CodeModel code;
    code.family = Family::rotated_planar;
    code.L = L;
    code.n = L * L;
    code.m = lat::rot_num_checks(L);
    code.rho_c = lat::rot_checks_per_row(L);
    code.rho_vo = L;
    code.rho_ve = L;

    auto face_qubits = [&](int fr, int fc) {
        std::vector<std::int32_t> q;
        for (int r = fr - 1; r <= fr; ++r)
            for (int c = fc - 1; c <= fc; ++c)
                if (lat::rot_qubit_valid(L, r, c)) q.push_back(r * L + c);
        return q;
    };

    code.check_adjacency.resize(code.m);
    for (int fr = 0; fr <= L; ++fr)
        for (int fc = 1; fc <= L - 1; ++fc)
            if (lat::rot_face_is_check(L, fr, fc))
                code.check_adjacency[lat::rot_check_label(L, fr, fc)] = face_qubits(fr, fc);
    detail::sort_adjacency(code.check_adjacency);
    code.variable_adjacency = detail::transpose_adjacency(code.check_adjacency, code.n);

    // Odd-colored faces: interior rows only, side columns included.
    for (int fr = 1; fr <= L - 1; ++fr)
        for (int fc = 0; fc <= L; ++fc)
            if (((fr + fc) & 1) == 1) code.dual_checks.push_back(face_qubits(fr, fc));
    detail::sort_adjacency(code.dual_checks);

    // Horizontal chain across the open boundaries; vertical chain in the dual.
    BitVector chain(code.n), dual_chain(code.n);
    for (int c = 0; c < L; ++c) chain.set(0 * L + c, true);
    for (int r = 0; r < L; ++r) dual_chain.set(r * L + 0, true);
    code.logical_representatives = {chain};
    code.dual_logical_representatives = {dual_chain};

    // Qubit-inclusive distance to the side columns, by breadth-first search
    // through the Tanner graph.
    code.boundary_distance.assign(code.n, 0);
    std::deque<int> queue;
    for (int r = 0; r < L; ++r) {
        for (int c : {0, L - 1}) {
            const int q = r * L + c;
            if (code.boundary_distance[q] == 0) {
                code.boundary_distance[q] = 1;
                queue.push_back(q);
            }
        }
    }
    while (!queue.empty()) {
        const int q = queue.front();
        queue.pop_front();
        for (std::int32_t chk : code.variable_adjacency[q])
            for (std::int32_t nb : code.check_adjacency[chk])
                if (code.boundary_distance[nb] == 0) {
                    code.boundary_distance[nb] = code.boundary_distance[q] + 1;
                    queue.push_back(nb);
                }
    }

    detail::validate_model(code);
    return code;
}

inline CodeModel build_code(Family family, int L) {
    return family == Family::toric ? build_toric(L) : build_rotated_planar(L);
}

// s_i = parity of e over the support of check i.
inline BitVector syndrome(const CodeModel& code, const BitVector& e) {
    if (e.size() != static_cast<std::size_t>(code.n))
        throw invalid_parameter("syndrome: error vector length " + std::to_string(e.size()) +
                                ", expected " + std::to_string(code.n));
    return detail::row_syndrome(code.check_adjacency, e);
}

// True iff the residual e ^ estimate acts as a logical operator: it has odd
// overlap with some dual-sector representative. Requires equal syndromes.
inline bool is_logical_failure(const CodeModel& code, const BitVector& e, const BitVector& est) {
#ifndef NDEBUG
    if (syndrome(code, e) != syndrome(code, est))
        throw contract_error("is_logical_failure: syndromes differ");
#endif
    const BitVector residual = e ^ est;
    for (const auto& rep : code.dual_logical_representatives)
        if (residual.dot(rep)) return true;
    return false;
}

} // namespace ppbf
