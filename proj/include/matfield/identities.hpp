#pragma once
// Structural identities of the mode-wise splitting, checked as measured
// residuals: the characterization of strain-type fields by the multiplier
// equation S + 2 grad_sym div (-lap)^{-1} S = 0, the velocity-to-strain
// isometry, the curl formula for the strain-part norm, the commutation of
// divergence with the projections, exact cubic-rotation equivariance, and the
// pointwise determinant bound for trace-free symmetric 3x3 values.

#include <limits>
#include <vector>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/eigenfield.hpp"
#include "matfield/fft.hpp"

namespace matfield {

struct StrainResidual {
    double trace_res = 0.0;       // ||tr S|| / ||S||
    double constraint_res = 0.0;  // ||S + 2 grad_sym div (-lap)^{-1} S|| / ||S||
};

// a field lies in the strain subspace iff both residuals vanish
inline StrainResidual check_strain_characterization(const Field& S_in) {
    require_kind(S_in, FieldKind::sym_matrix, "check_strain_characterization");
    if (S_in.grid().d != 3) throw config_error("check_strain_characterization: needs d = 3");
    const Field S = as_spectral(S_in);
    const double nS = norm(S);
    if (nS == 0.0) return {0.0, 0.0};
    StrainResidual r;
    r.trace_res = norm(trace_field(S)) / nS;
    Field T = sym_gradient(inverse_laplacian(divergence(S)));
    T *= 2.0;
    T += S;
    r.constraint_res = norm(T) / nS;
    return r;
}

// grad_sym (-lap)^{-1/2} u for divergence-free mean-zero u; an isometry onto
// the strain subspace up to the factor 1/2 on squared norms
inline Field strain_from_velocity(const Field& u_in) {
    require_kind(u_in, FieldKind::vector, "strain_from_velocity");
    const Field u = as_spectral(u_in);
    const double nu = norm(u);
    if (nu > 0.0) {
        const double div_res = norm(divergence_scalar(u)) / nu;
        if (div_res > 1e-10)
            throw precondition_error("strain_from_velocity: input not divergence-free", div_res);
        double mean = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) mean = std::max(mean, std::abs(u.at(0, c)));
        if (mean > 1e-12 * nu)
            throw precondition_error("strain_from_velocity: input not mean-zero", mean);
    }
    Field S = sym_gradient(neg_laplacian_pow(u, -0.5));
    return u_in.rep() == Rep::physical ? as_physical(S) : S;
}

// ||P_st M||^2 computed through the curl: 2 ||curl div (-lap)^{-1} M||^2
inline double projection_norm_via_curl(const Field& M_in) {
    require_kind(M_in, FieldKind::sym_matrix, "projection_norm_via_curl");
    if (M_in.grid().d != 3) throw config_error("projection_norm_via_curl: needs d = 3");
    const Field M = as_spectral(M_in);
    return 2.0 * norm2(curl(inverse_laplacian(divergence(M))));
}

// || div(P_st M) - P_df(div M) || / ||M||; zero in exact arithmetic
inline double div_commutation_residual(const Field& M_in) {
    require_kind(M_in, FieldKind::sym_matrix, "div_commutation_residual");
    const Field M = as_spectral(M_in);
    const double nM = norm(M);
    if (nM == 0.0) return 0.0;
    Field lhs = divergence(project_st(M));
    Field rhs = project_divfree(divergence(M));
    lhs -= rhs;
    return norm(lhs) / nM;
}

// ---------------------------------------------------------------------------
// cubic rotations: the 24 signed permutation matrices with determinant +1
// act exactly on the periodic grid, in either representation, by
// S^Q(x) = Q' S(Qx) Q

struct CubicRotation {
    int m[3][3];
};

inline std::vector<CubicRotation> cubic_rotations() {
    std::vector<CubicRotation> out;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int pi = 0; pi < 6; ++pi)
        for (int sbits = 0; sbits < 8; ++sbits) {
            CubicRotation q{};
            int det_sign = (pi == 1 || pi == 2 || pi == 5) ? -1 : 1;  // permutation parity
            for (int r = 0; r < 3; ++r) {
                const int s = (sbits >> r & 1) ? -1 : 1;
                q.m[r][perm[pi][r]] = s;
                det_sign *= s;
            }
            if (det_sign == 1) out.push_back(q);
        }
    return out;
}

namespace detail {

// column structure of a signed permutation: row[c] is the nonzero row of
// column c and sign[c] its sign; returns false if Q is not a rotation of
// the cube
inline bool signed_perm_columns(const CubicRotation& q, int* row, int* sign) {
    bool used[3] = {false, false, false};
    int det_perm[3];
    for (int c = 0; c < 3; ++c) {
        int cnt = 0;
        for (int r = 0; r < 3; ++r) {
            if (q.m[r][c] == 0) continue;
            if (q.m[r][c] != 1 && q.m[r][c] != -1) return false;
            row[c] = r;
            sign[c] = q.m[r][c];
            ++cnt;
        }
        if (cnt != 1 || used[row[c]]) return false;
        used[row[c]] = true;
        det_perm[c] = row[c];
    }
    int parity = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (det_perm[i] > det_perm[j]) parity = -parity;
    return parity * sign[0] * sign[1] * sign[2] == 1;
}

}  // namespace detail

// S^Q(x) = Q' S(Qx) Q as an exact sample permutation plus index conjugation;
// works identically on either representation (the mode lattice transforms by
// the same signed permutation)
inline Field rotate_field(const Field& S, const CubicRotation& Q) {
    require_kind(S, FieldKind::sym_matrix, "rotate_field");
    const Grid& g = S.grid();
    if (g.d != 3) throw config_error("rotate_field: needs d = 3");
    int col_row[3], col_sign[3];
    if (!detail::signed_perm_columns(Q, col_row, col_sign))
        throw config_error("rotate_field: matrix is not a grid-preserving rotation");
    // row structure: row r has its nonzero in column pcol[r] with sign psgn[r]
    int pcol[3], psgn[3];
    for (int c = 0; c < 3; ++c) {
        pcol[col_row[c]] = c;
        psgn[col_row[c]] = col_sign[c];
    }
    Field out(g, S.kind(), S.rep());
    const int n = g.n;
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        // y = Q x: y_r = psgn[r] * x_{pcol[r]}  (mod n)
        std::size_t q = 0;
        for (int r = 0; r < 3; ++r) {
            int y = psgn[r] * ix[pcol[r]];
            y %= n;
            if (y < 0) y += n;
            q = q * n + static_cast<std::size_t>(y);
        }
        // (Q' S Q)_{ab} = sign_a sign_b S_{row_a row_b}
        int idx = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b, ++idx) {
                const int i = col_row[a], j = col_row[b];
                const complexd v = (i <= j) ? S.at(q, sym_index(i, j, 3)) : S.at(q, sym_index(j, i, 3));
                out.at(p, idx) = static_cast<double>(col_sign[a] * col_sign[b]) * v;
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// pointwise determinant bound for trace-free symmetric 3x3 values:
// -4 det M <= (2/9) sqrt(6) |M|^3, with equality exactly where the two upper
// eigenvalues coincide

struct DetBoundReport {
    double max_violation = 0.0;          // max over points of lhs - rhs (usually negative)
    double max_norm_cubed = 0.0;         // max |M(x)|^3, the natural violation scale
    long equality_sites = 0;             // points with |lhs - rhs| < 1e-8
    long degenerate_equality_sites = 0;  // equality sites with lam2 = lam3 to 1e-6
};

inline DetBoundReport det_bound_check(const Field& M_in) {
    require_kind(M_in, FieldKind::sym_matrix, "det_bound_check");
    if (M_in.grid().d != 3) throw config_error("det_bound_check: needs d = 3");
    const Field M = as_physical(M_in);
    const Grid& g = M.grid();
    double worst_tr = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p)
        worst_tr = std::max(worst_tr, std::abs(M.at(p, 0) + M.at(p, 3) + M.at(p, 5)));
    if (worst_tr > 1e-10)
        throw precondition_error("det_bound_check: input is not trace-free", worst_tr);

    const double cst = (2.0 / 9.0) * std::sqrt(6.0);
    DetBoundReport rep;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.points(); ++p) {
        double m[6];
        for (int c = 0; c < 6; ++c) m[c] = M.at(p, c).real();
        const double det = m[0] * (m[3] * m[5] - m[4] * m[4]) - m[1] * (m[1] * m[5] - m[4] * m[2]) +
                           m[2] * (m[1] * m[4] - m[3] * m[2]);
        const double fro2 = m[0] * m[0] + m[3] * m[3] + m[5] * m[5] +
                            2.0 * (m[1] * m[1] + m[2] * m[2] + m[4] * m[4]);
        const double fro3 = fro2 * std::sqrt(fro2);
        const double gap = -4.0 * det - cst * fro3;
        worst = std::max(worst, gap);
        rep.max_norm_cubed = std::max(rep.max_norm_cubed, fro3);
        if (std::abs(gap) < 1e-8) {
            ++rep.equality_sites;
            Eigen3 e = sym_eigen3(m);
            if (std::abs(e.lam[2] - e.lam[1]) < 1e-6) ++rep.degenerate_equality_sites;
        }
    }
    rep.max_violation = worst;
    return rep;
}

}  // namespace matfield
