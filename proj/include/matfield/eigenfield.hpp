#pragma once
// Pointwise eigenvalue machinery for real symmetric 3x3 matrix fields, and
// the max-mid parameterization lam/sqrt6 (I - 3 v (x) v) whose pointwise
// spectrum is (-2, 1, 1) lam/sqrt6.
//
// Conventions chosen for reproducibility: eigenvalues sort ascending;
// each eigenvector's largest-magnitude component is made positive;
// (near-)degenerate eigenvalue groups get the frame produced by
// Gram-Schmidt of the standard basis projected onto the eigenspace, so the
// output does not depend on the iteration path.

#include <cstring>
#include <vector>

#include "matfield/core.hpp"
#include "matfield/fft.hpp"

namespace matfield {

struct Eigen3 {
    double lam[3];     // ascending
    double vec[3][3];  // vec[i] is the unit eigenvector of lam[i]
};

namespace detail {

// cyclic Jacobi; robust and plenty fast for 3x3
inline void jacobi3(double a[3][3], double v[3][3], double lam[3]) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) {
        lam[0] = lam[1] = lam[2] = 0.0;
        return;
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300 || off < 1e-16 * scale) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r][p], arq = a[r][q];
                    a[r][p] = a[p][r] = c * arp - s * arq;
                    a[r][q] = a[q][r] = s * arp + c * arq;
                }
                for (int r = 0; r < 3; ++r) {
                    const double vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
    }
    for (int i = 0; i < 3; ++i) lam[i] = a[i][i];
}

}  // namespace detail

// eigen-decomposition of a packed symmetric 3x3 (order 00,01,02,11,12,22)
inline Eigen3 sym_eigen3(const double* m) {
    double a[3][3] = {{m[0], m[1], m[2]}, {m[1], m[3], m[4]}, {m[2], m[4], m[5]}};
    double v[3][3], lam[3];
    double scale = 0.0;
    for (int c = 0; c < 6; ++c) scale = std::max(scale, std::abs(m[c]));
    detail::jacobi3(a, v, lam);

    int order[3] = {0, 1, 2};
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (lam[order[j]] < lam[order[i]]) std::swap(order[i], order[j]);

    Eigen3 e;
    for (int i = 0; i < 3; ++i) {
        e.lam[i] = lam[order[i]];
        for (int r = 0; r < 3; ++r) e.vec[i][r] = v[r][order[i]];
    }

    // deterministic frame on (near-)degenerate groups: Gram-Schmidt of the
    // standard basis projected onto the eigenspace, in index order
    const double gap_tol = 1e-12 * (1.0 + scale);
    int i = 0;
    while (i < 3) {
        int j = i + 1;
        while (j < 3 && e.lam[j] - e.lam[j - 1] < gap_tol) ++j;
        const int sz = j - i;
        if (sz > 1) {
            double proj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
            for (int k = i; k < j; ++k)
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) proj[r][c] += e.vec[k][r] * e.vec[k][c];
            int have = 0;
            double frame[3][3];
            for (int b = 0; b < 3 && have < sz; ++b) {
                double w[3] = {proj[0][b], proj[1][b], proj[2][b]};
                for (int k = 0; k < have; ++k) {
                    double dot = 0.0;
                    for (int r = 0; r < 3; ++r) dot += w[r] * frame[k][r];
                    for (int r = 0; r < 3; ++r) w[r] -= dot * frame[k][r];
                }
                double nw = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
                if (nw < 1e-6) continue;
                for (int r = 0; r < 3; ++r) frame[have][r] = w[r] / nw;
                ++have;
            }
            if (have == sz)
                for (int k = 0; k < sz; ++k)
                    for (int r = 0; r < 3; ++r) e.vec[i + k][r] = frame[k][r];
        }
        i = j;
    }

    // sign: largest-magnitude component positive (lowest index on ties)
    for (int k = 0; k < 3; ++k) {
        int big = 0;
        for (int r = 1; r < 3; ++r)
            if (std::abs(e.vec[k][r]) > std::abs(e.vec[k][big]) + 1e-15) big = r;
        if (e.vec[k][big] < 0.0)
            for (int r = 0; r < 3; ++r) e.vec[k][r] = -e.vec[k][r];
    }
    return e;
}

// ---------------------------------------------------------------------------
// field-level eigen-decomposition

struct EigenField {
    Field lam1, lam2, lam3;          // real scalar fields, ascending
    std::vector<double> frames;      // 9 doubles per point: rows are eigenvectors
    double reconstruction_error = 0.0;  // max pointwise error of sum lam_i v_i (x) v_i

    const double* frame(std::size_t p) const { return frames.data() + 9 * p; }
};

inline EigenField eigen_decompose_field(const Field& S) {
    require_kind(S, FieldKind::sym_matrix, "eigen_decompose_field");
    require_rep(S, Rep::physical, "eigen_decompose_field");
    if (S.grid().d != 3) throw config_error("eigen_decompose_field: needs d = 3");
    const Grid& g = S.grid();
    EigenField ef{Field(g, FieldKind::scalar, Rep::physical), Field(g, FieldKind::scalar, Rep::physical),
                  Field(g, FieldKind::scalar, Rep::physical)};
    ef.frames.resize(9 * g.points());
    double worst = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        double m[6];
        for (int c = 0; c < 6; ++c) m[c] = S.at(p, c).real();
        Eigen3 e = sym_eigen3(m);
        ef.lam1[p] = complexd(e.lam[0], 0.0);
        ef.lam2[p] = complexd(e.lam[1], 0.0);
        ef.lam3[p] = complexd(e.lam[2], 0.0);
        double* fr = ef.frames.data() + 9 * p;
        for (int k = 0; k < 3; ++k)
            for (int r = 0; r < 3; ++r) fr[3 * k + r] = e.vec[k][r];
        // pointwise reconstruction check
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k) acc += e.lam[k] * e.vec[k][i] * e.vec[k][j];
                worst = std::max(worst, std::abs(acc - m[idx]));
            }
    }
    ef.reconstruction_error = worst;
    return ef;
}

// ---------------------------------------------------------------------------
// max-mid parameterization

struct MaxMidField {
    Field lam;  // real scalar, lam >= 0
    Field v;    // real unit vector wherever lam > 0
};

// validates the max-mid invariants; throws precondition_error otherwise
inline void require_maxmid(const MaxMidField& mm, const char* where = "require_maxmid") {
    require_kind(mm.lam, FieldKind::scalar, where);
    require_kind(mm.v, FieldKind::vector, where);
    require_rep(mm.lam, Rep::physical, where);
    require_rep(mm.v, Rep::physical, where);
    require_same_grid(mm.lam, mm.v, where);
    const Grid& g = mm.lam.grid();
    double min_lam = 0.0, worst_unit = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double l = mm.lam[p].real();
        min_lam = std::min(min_lam, l);
        if (l > 1e-12) {
            double n2 = 0.0;
            for (int a = 0; a < g.d; ++a) n2 += mm.v.at(p, a).real() * mm.v.at(p, a).real();
            worst_unit = std::max(worst_unit, std::abs(std::sqrt(n2) - 1.0));
        }
    }
    if (min_lam < -1e-12)
        throw precondition_error(std::string(where) + ": negative amplitude", -min_lam);
    if (worst_unit > 1e-10)
        throw precondition_error(std::string(where) + ": direction field not unit length", worst_unit);
}

// lam/sqrt6 (I - 3 v (x) v); pointwise trace-free with |M(x)| = lam(x)
inline Field assemble_maxmid(const MaxMidField& mm) {
    require_maxmid(mm, "assemble_maxmid");
    const Grid& g = mm.lam.grid();
    if (g.d != 3) throw config_error("assemble_maxmid: needs d = 3");
    Field M(g, FieldKind::sym_matrix, Rep::physical);
    const double s6 = 1.0 / std::sqrt(6.0);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double l = mm.lam[p].real() * s6;
        double v[3] = {mm.v.at(p, 0).real(), mm.v.at(p, 1).real(), mm.v.at(p, 2).real()};
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx)
                M.at(p, idx) = complexd(l * ((i == j ? 1.0 : 0.0) - 3.0 * v[i] * v[j]), 0.0);
    }
    return M;
}

}  // namespace matfield
