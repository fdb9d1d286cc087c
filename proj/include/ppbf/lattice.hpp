#pragma once

#include <cstdint>

namespace ppbf::lattice {

// ---------------------------------------------------------------------------
// Toric code, size L. Checks sit on an L x L periodic grid of vertices and
// qubits on the edges. Labels run row-wise:
//   check (r,c)          -> r*L + c
//   horizontal edge from (r,c) to (r,c+1) -> variable row 2r,   label 2rL + c
//   vertical   edge from (r,c) to (r+1,c) -> variable row 2r+1, label (2r+1)L + c
// ---------------------------------------------------------------------------

struct ToricCoord {
    int r, c;
};

inline int tor_mod(int v, int L) {
    v %= L;
    return v < 0 ? v + L : v;
}

inline int toric_check(int L, int r, int c) { return tor_mod(r, L) * L + tor_mod(c, L); }
inline ToricCoord toric_check_coord(int L, int j) { return {j / L, j % L}; }

inline int toric_h(int L, int r, int c) { return 2 * tor_mod(r, L) * L + tor_mod(c, L); }
inline int toric_v(int L, int r, int c) { return (2 * tor_mod(r, L) + 1) * L + tor_mod(c, L); }

inline bool toric_var_is_h(int L, int q) { return (q / L) % 2 == 0; }
inline ToricCoord toric_var_coord(int L, int q) { return {(q / L) / 2, q % L}; }

// Smallest-magnitude representative of d mod L, in (-L/2, L/2]; ties go positive.
inline int toric_canonical_shift(int d, int L) {
    d = tor_mod(d, L);
    return 2 * d > L ? d - L : d;
}

// ---------------------------------------------------------------------------
// Rotated planar code, odd size L. Qubits form an L x L grid, label rL + c.
// Checks are the even-colored faces of the dual grid: face (fr,fc) covers the
// qubits (fr-1..fr, fc-1..fc) clipped to the grid, and is a check iff
// fr in [0,L], fc in [1,L-1], fr+fc even. Rows fr=0 and fr=L hold the
// two-qubit boundary checks; side columns carry the degree-1 qubits.
//
// In diagonal coordinates u=(fr+fc)/2, w=(fr-fc)/2 the checks occupy points
// of a square grid and every qubit is an edge between two such points
// (one or both of which may fall outside the check set near the boundary):
//   qubit (r,c), r+c even: edge (u,w)-(u+1,w) with u=(r+c)/2, w=(r-c)/2
//   qubit (r,c), r+c odd:  edge (u,w)-(u,w+1) with u=(r+c+1)/2, w=(r-c-1)/2
// ---------------------------------------------------------------------------

struct Face {
    int fr, fc;
};

struct Diag {
    int u, w;
};

inline int rot_checks_per_row(int L) { return (L - 1) / 2; }
inline int rot_num_checks(int L) { return (L * L - 1) / 2; }

inline bool rot_face_is_check(int L, int fr, int fc) {
    return fr >= 0 && fr <= L && fc >= 1 && fc <= L - 1 && ((fr + fc) & 1) == 0;
}

inline int rot_check_label(int L, int fr, int fc) {
    const int idx = (fr % 2 == 0) ? fc / 2 - 1 : (fc - 1) / 2;
    return fr * rot_checks_per_row(L) + idx;
}

inline Face rot_check_face(int L, int j) {
    const int per = rot_checks_per_row(L);
    const int fr = j / per;
    const int idx = j % per;
    const int fc = (fr % 2 == 0) ? 2 * idx + 2 : 2 * idx + 1;
    return {fr, fc};
}

inline Diag face_to_diag(Face f) { return {(f.fr + f.fc) / 2, (f.fr - f.fc) / 2}; }
inline Face diag_to_face(Diag d) { return {d.u + d.w, d.u - d.w}; }

inline bool rot_qubit_valid(int L, int r, int c) { return r >= 0 && r < L && c >= 0 && c < L; }

// Endpoint of the qubit's diagonal edge with the smaller coordinate; the
// second endpoint is (u+1,w) when axis_u is true, else (u,w+1).
struct QubitEdge {
    Diag lo;
    bool axis_u;
};

inline QubitEdge rot_qubit_edge(int r, int c) {
    if (((r + c) & 1) == 0) return {{(r + c) / 2, (r - c) / 2}, true};
    return {{(r + c + 1) / 2, (r - c - 1) / 2}, false};
}

// Qubit (r,c) carried by a diagonal edge.
inline int rot_edge_qubit_r(Diag lo, bool /*axis_u*/) { return lo.u + lo.w; }
inline int rot_edge_qubit_c(Diag lo, bool axis_u) { return axis_u ? lo.u - lo.w : lo.u - lo.w - 1; }

// ---------------------------------------------------------------------------
// Bulk influence lattice for the rotated family: an R x C grid of check sites
// in diagonal coordinates with qubits on all edges. Labels:
//   check (a,b)                    -> a*C + b
//   h edge (a,b)-(a,b+1), b<C-1    -> variable row 2a,   label a*(2C-1) + b
//   v edge (a,b)-(a+1,b), a<R-1    -> variable row 2a+1, label a*(2C-1) + (C-1) + b
// ---------------------------------------------------------------------------

struct Bulk {
    int R, C;

    int num_checks() const { return R * C; }
    int num_vars() const { return (R - 1) * (2 * C - 1) + (C - 1); }
    int var_stride() const { return 2 * C - 1; }

    int check(int a, int b) const { return a * C + b; }
    int h_edge(int a, int b) const { return a * var_stride() + b; }
    int v_edge(int a, int b) const { return a * var_stride() + (C - 1) + b; }

    bool check_in_range(int a, int b) const { return a >= 0 && a < R && b >= 0 && b < C; }
    bool h_in_range(int a, int b) const { return a >= 0 && a < R && b >= 0 && b < C - 1; }
    bool v_in_range(int a, int b) const { return a >= 0 && a < R - 1 && b >= 0 && b < C; }
};

} // namespace ppbf::lattice
