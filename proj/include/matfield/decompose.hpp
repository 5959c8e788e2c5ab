#pragma once
// Orthogonal mode-wise decomposition of matrix-valued fields.
//
// For each nonzero mode k with unit direction xi = k/|k|, a symmetric matrix
// value M splits into four mutually orthogonal pieces:
//
//   st         xi (x) wp + wp (x) xi          with w = M xi, wp = w - (xi.w) xi
//   hess       (xi' M xi) xi (x) xi
//   id_tilde   c (I - xi (x) xi),             c = (tr M - xi' M xi)/(d-1)
//   trdivfree  the remainder
//
// (dots here are the bilinear, unconjugated pairing; the multipliers are real
// and even in k, so real fields stay real).  The mean mode carries no
// direction: its trace part (tr/d) I goes to id_tilde and its trace-free part
// to trdivfree, while st and hess have zero mean.
//
// Antisymmetric matrix values split into two pieces:
//
//   vort     w (x) xi - xi (x) w   with w = A xi
//   divfree  the remainder (the mean mode is divergence-free).
//
// brute_force_project realizes the same projections independently through
// explicit per-mode orthonormal span matrices built from a deterministically
// completed frame; it exists as a cross-check oracle for the closed forms.

#include <array>

#include "matfield/core.hpp"
#include "matfield/fft.hpp"

namespace matfield {

enum class SymSubspace { st, hess, id_tilde, trdivfree };
enum class AntiSubspace { vort, divfree };

inline const char* to_string(SymSubspace s) {
    switch (s) {
        case SymSubspace::st: return "st";
        case SymSubspace::hess: return "hess";
        case SymSubspace::id_tilde: return "id_tilde";
        case SymSubspace::trdivfree: return "trdivfree";
    }
    return "?";
}

// subspace dimensions of the per-mode symmetric splitting at a nonzero mode
inline int subspace_dim(SymSubspace s, int d) {
    switch (s) {
        case SymSubspace::st: return d - 1;
        case SymSubspace::hess: return 1;
        case SymSubspace::id_tilde: return 1;
        case SymSubspace::trdivfree: return (d - 1) * (d - 2) / 2 + (d - 2);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// per-mode kernels (packed upper-triangle component arrays, d <= 4)

namespace modekernel {

// all four symmetric projections of one mode value in a single pass
inline void decompose_sym_mode(const complexd* M, const double* xi, int d,
                               complexd* st, complexd* hess, complexd* id, complexd* tdf) {
    complexd w[4];
    for (int i = 0; i < d; ++i) {
        complexd acc(0.0, 0.0);
        for (int j = 0; j < d; ++j)
            acc += ((i <= j) ? M[sym_index(i, j, d)] : M[sym_index(j, i, d)]) * xi[j];
        w[i] = acc;
    }
    complexd s(0.0, 0.0), tr(0.0, 0.0);
    for (int i = 0; i < d; ++i) {
        s += xi[i] * w[i];
        tr += M[sym_index(i, i, d)];
    }
    const complexd c = (tr - s) / static_cast<double>(d - 1);
    complexd wp[4];
    for (int i = 0; i < d; ++i) wp[i] = w[i] - s * xi[i];
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++idx) {
            const complexd stv = xi[i] * wp[j] + wp[i] * xi[j];
            const complexd hv = s * (xi[i] * xi[j]);
            const complexd iv = (i == j) ? c * (1.0 - xi[i] * xi[j]) : -c * (xi[i] * xi[j]);
            st[idx] = stv;
            hess[idx] = hv;
            id[idx] = iv;
            tdf[idx] = M[idx] - stv - hv - iv;
        }
}

// single-subspace closed forms (used for idempotence / annihilation checks)
inline void project_sym_mode(const complexd* M, const double* xi, int d, SymSubspace which, complexd* out) {
    complexd st[10], hess[10], id[10], tdf[10];
    decompose_sym_mode(M, xi, d, st, hess, id, tdf);
    const complexd* src = which == SymSubspace::st ? st
                          : which == SymSubspace::hess ? hess
                          : which == SymSubspace::id_tilde ? id
                                                           : tdf;
    const int nc = d * (d + 1) / 2;
    for (int c = 0; c < nc; ++c) out[c] = src[c];
}

// mean-mode convention for the symmetric split
inline void decompose_sym_mean(const complexd* M, int d,
                               complexd* st, complexd* hess, complexd* id, complexd* tdf) {
    complexd tr(0.0, 0.0);
    for (int i = 0; i < d; ++i) tr += M[sym_index(i, i, d)];
    const complexd c = tr / static_cast<double>(d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++idx) {
            st[idx] = complexd(0.0, 0.0);
            hess[idx] = complexd(0.0, 0.0);
            id[idx] = (i == j) ? c : complexd(0.0, 0.0);
            tdf[idx] = M[idx] - id[idx];
        }
}

// antisymmetric split of one nonzero-mode value
inline void decompose_antisym_mode(const complexd* A, const double* xi, int d,
                                   complexd* vort, complexd* divfree) {
    complexd w[4];
    for (int i = 0; i < d; ++i) {
        complexd acc(0.0, 0.0);
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const complexd v = (i < j) ? A[antisym_index(i, j, d)] : -A[antisym_index(j, i, d)];
            acc += v * xi[j];
        }
        w[i] = acc;
    }
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j, ++idx) {
            const complexd vv = w[i] * xi[j] - xi[i] * w[j];
            vort[idx] = vv;
            divfree[idx] = A[idx] - vv;
        }
}

}  // namespace modekernel

// ---------------------------------------------------------------------------
// deterministic frame completion
//
// The frame B(k) = {xi, mu_1, ..., mu_{d-1}} at a nonzero mode: mu_1 is the
// Gram-Schmidt completion of the standard basis vector least aligned with xi
// (ties broken by lowest index); in d = 3, mu_2 = xi x mu_1; in general d the
// remaining standard basis vectors are orthonormalized in index order.

struct ModeFrame {
    int d = 0;
    double xi[4] = {0, 0, 0, 0};
    double mu[3][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
};

inline ModeFrame mode_frame(const double* xihat, int d) {
    ModeFrame fr;
    fr.d = d;
    for (int a = 0; a < d; ++a) fr.xi[a] = xihat[a];

    int least = 0;
    double best = 2.0;
    for (int j = 0; j < d; ++j) {
        const double align = std::abs(xihat[j]);
        if (align < best - 1e-15) {  // strict improvement; ties keep lowest index
            best = align;
            least = j;
        }
    }
    // mu_1 from e_least
    {
        double v[4];
        for (int a = 0; a < d; ++a) v[a] = (a == least ? 1.0 : 0.0) - xihat[least] * xihat[a];
        double nv = 0.0;
        for (int a = 0; a < d; ++a) nv += v[a] * v[a];
        nv = std::sqrt(nv);
        for (int a = 0; a < d; ++a) fr.mu[0][a] = v[a] / nv;
    }
    if (d == 2) return fr;
    if (d == 3) {
        fr.mu[1][0] = xihat[1] * fr.mu[0][2] - xihat[2] * fr.mu[0][1];
        fr.mu[1][1] = xihat[2] * fr.mu[0][0] - xihat[0] * fr.mu[0][2];
        fr.mu[1][2] = xihat[0] * fr.mu[0][1] - xihat[1] * fr.mu[0][0];
        return fr;
    }
    // general d: continue Gram-Schmidt over remaining standard basis vectors
    int have = 1;
    for (int j = 0; j < d && have < d - 1; ++j) {
        if (j == least) continue;
        double v[4];
        for (int a = 0; a < d; ++a) v[a] = (a == j ? 1.0 : 0.0) - xihat[j] * xihat[a];
        for (int m = 0; m < have; ++m) {
            double dot = 0.0;
            for (int a = 0; a < d; ++a) dot += v[a] * fr.mu[m][a];
            for (int a = 0; a < d; ++a) v[a] -= dot * fr.mu[m][a];
        }
        double nv = 0.0;
        for (int a = 0; a < d; ++a) nv += v[a] * v[a];
        nv = std::sqrt(nv);
        if (nv < 1e-10) continue;  // e_j is (numerically) in the span already
        for (int a = 0; a < d; ++a) fr.mu[have][a] = v[a] / nv;
        ++have;
    }
    return fr;
}

// ---------------------------------------------------------------------------
// explicit span matrices per subspace (the oracle basis)

namespace detail {

inline void outer_sym(const double* a, const double* b, int d, double s, double* out) {
    // out += s * (a (x) b + b (x) a) on the packed upper triangle
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++idx) out[idx] += s * (a[i] * b[j] + b[i] * a[j]);
}

}  // namespace detail

// Fill `basis` with the orthonormal span matrices of `which` at this frame;
// returns the count.  Each matrix is a packed upper triangle of length
// d(d+1)/2.  The spans:
//   hess       { xi (x) xi }
//   st         { (xi (x) mu_k + mu_k (x) xi)/sqrt2 }
//   trdivfree  { (mu_j (x) mu_k + mu_k (x) mu_j)/sqrt2, j<k }
//              u { (mu_k (x) mu_k - mu_{k+1} (x) mu_{k+1})/sqrt2 }
//   id_tilde   { (sum_k mu_k (x) mu_k)/sqrt(d-1) }
inline int sym_span_basis(const ModeFrame& fr, SymSubspace which, double basis[][10]) {
    const int d = fr.d;
    const int nc = d * (d + 1) / 2;
    const double r2 = 1.0 / std::sqrt(2.0);
    int cnt = 0;
    auto clear = [&](double* b) { for (int c = 0; c < nc; ++c) b[c] = 0.0; };
    switch (which) {
        case SymSubspace::hess:
            clear(basis[cnt]);
            detail::outer_sym(fr.xi, fr.xi, d, 0.5, basis[cnt]);
            ++cnt;
            break;
        case SymSubspace::st:
            for (int k = 0; k < d - 1; ++k) {
                clear(basis[cnt]);
                detail::outer_sym(fr.xi, fr.mu[k], d, r2, basis[cnt]);
                ++cnt;
            }
            break;
        case SymSubspace::trdivfree:
            for (int j = 0; j < d - 1; ++j)
                for (int k = j + 1; k < d - 1; ++k) {
                    clear(basis[cnt]);
                    detail::outer_sym(fr.mu[j], fr.mu[k], d, r2, basis[cnt]);
                    ++cnt;
                }
            for (int k = 0; k + 1 < d - 1; ++k) {
                clear(basis[cnt]);
                detail::outer_sym(fr.mu[k], fr.mu[k], d, 0.5 * r2, basis[cnt]);
                detail::outer_sym(fr.mu[k + 1], fr.mu[k + 1], d, -0.5 * r2, basis[cnt]);
                ++cnt;
            }
            break;
        case SymSubspace::id_tilde: {
            clear(basis[cnt]);
            const double s = 1.0 / std::sqrt(static_cast<double>(d - 1));
            for (int k = 0; k < d - 1; ++k) detail::outer_sym(fr.mu[k], fr.mu[k], d, 0.5 * s, basis[cnt]);
            ++cnt;
            break;
        }
    }
    return cnt;
}

// antisymmetric spans: vort { (xi (x) mu_k - mu_k (x) xi)/sqrt2 },
// divfree { (mu_j (x) mu_k - mu_k (x) mu_j)/sqrt2, j<k }
inline int antisym_span_basis(const ModeFrame& fr, AntiSubspace which, double basis[][6]) {
    const int d = fr.d;
    const int nc = d * (d - 1) / 2;
    const double r2 = 1.0 / std::sqrt(2.0);
    int cnt = 0;
    auto put = [&](const double* a, const double* b) {
        double* out = basis[cnt];
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j, ++idx) out[idx] = r2 * (a[i] * b[j] - b[i] * a[j]);
        (void)nc;
        ++cnt;
    };
    if (which == AntiSubspace::vort) {
        for (int k = 0; k < d - 1; ++k) put(fr.xi, fr.mu[k]);
    } else {
        for (int j = 0; j < d - 1; ++j)
            for (int k = j + 1; k < d - 1; ++k) put(fr.mu[j], fr.mu[k]);
    }
    return cnt;
}

namespace modekernel {

// oracle projection of one symmetric mode value by explicit span matrices;
// the spanning set is orthonormalized first (the trace-difference family is
// not mutually orthogonal once d >= 4), so the projection depends only on
// the span
inline void brute_force_sym_mode(const complexd* M, const ModeFrame& fr, SymSubspace which, complexd* out) {
    const int d = fr.d;
    const int nc = d * (d + 1) / 2;
    double basis[6][10];
    const int cnt = sym_span_basis(fr, which, basis);
    double w[10];
    for (int c = 0; c < nc; ++c) w[c] = component_weight(FieldKind::sym_matrix, d, c);
    auto dot = [&](const double* a, const double* b) {
        double acc = 0.0;
        for (int c = 0; c < nc; ++c) acc += w[c] * a[c] * b[c];
        return acc;
    };
    for (int b = 0; b < cnt; ++b) {
        for (int prev = 0; prev < b; ++prev) {
            const double proj = dot(basis[b], basis[prev]);
            for (int c = 0; c < nc; ++c) basis[b][c] -= proj * basis[prev][c];
        }
        const double nb = std::sqrt(dot(basis[b], basis[b]));
        for (int c = 0; c < nc; ++c) basis[b][c] /= nb;
    }
    for (int c = 0; c < nc; ++c) out[c] = complexd(0.0, 0.0);
    for (int b = 0; b < cnt; ++b) {
        complexd coeff(0.0, 0.0);
        for (int c = 0; c < nc; ++c) coeff += w[c] * basis[b][c] * M[c];
        for (int c = 0; c < nc; ++c) out[c] += coeff * basis[b][c];
    }
}

inline void brute_force_antisym_mode(const complexd* A, const ModeFrame& fr, AntiSubspace which, complexd* out) {
    const int d = fr.d;
    const int nc = d * (d - 1) / 2;
    double basis[3][6];
    const int cnt = antisym_span_basis(fr, which, basis);
    for (int c = 0; c < nc; ++c) out[c] = complexd(0.0, 0.0);
    for (int b = 0; b < cnt; ++b) {
        complexd coeff(0.0, 0.0);
        for (int c = 0; c < nc; ++c) coeff += 2.0 * basis[b][c] * A[c];
        for (int c = 0; c < nc; ++c) out[c] += coeff * basis[b][c];
    }
}

}  // namespace modekernel

// ---------------------------------------------------------------------------
// field-level operations

namespace detail {

// unit direction of mode ix; returns false at the mean mode
inline bool unit_xi(const Grid& g, const int* ix, double* xihat) {
    double norm2 = 0.0;
    for (int a = 0; a < g.d; ++a) {
        const double x = static_cast<double>(g.signed_mode(ix[a]));
        xihat[a] = x;
        norm2 += x * x;
    }
    if (norm2 == 0.0) return false;
    const double inv = 1.0 / std::sqrt(norm2);
    for (int a = 0; a < g.d; ++a) xihat[a] *= inv;
    return true;
}

}  // namespace detail

struct DecompositionResult {
    Field st, hess, id_tilde, trdivfree;
    std::array<std::array<double, 4>, 4> gram{};  // pairwise inner products of the parts
    double reconstruction_error = 0.0;            // ||M - (st+hess+id+tdf)|| / ||M||

    const Field& part(SymSubspace s) const {
        switch (s) {
            case SymSubspace::st: return st;
            case SymSubspace::hess: return hess;
            case SymSubspace::id_tilde: return id_tilde;
            default: return trdivfree;
        }
    }
};

inline DecompositionResult decompose_sym(const Field& M_in) {
    require_kind(M_in, FieldKind::sym_matrix, "decompose_sym");
    const bool was_physical = M_in.rep() == Rep::physical;
    const Field M = as_spectral(M_in);
    const Grid& g = M.grid();
    const int d = g.d, nc = M.ncomp();

    DecompositionResult r{Field(g, FieldKind::sym_matrix, Rep::spectral),
                          Field(g, FieldKind::sym_matrix, Rep::spectral),
                          Field(g, FieldKind::sym_matrix, Rep::spectral),
                          Field(g, FieldKind::sym_matrix, Rep::spectral)};

    int ix[4];
    double xihat[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd* m = M.data() + p * nc;
        complexd* st = r.st.data() + p * nc;
        complexd* he = r.hess.data() + p * nc;
        complexd* id = r.id_tilde.data() + p * nc;
        complexd* td = r.trdivfree.data() + p * nc;
        if (detail::unit_xi(g, ix, xihat))
            modekernel::decompose_sym_mode(m, xihat, d, st, he, id, td);
        else
            modekernel::decompose_sym_mean(m, d, st, he, id, td);
    }

    Field sum = r.st;
    sum += r.hess;
    sum += r.id_tilde;
    sum += r.trdivfree;
    sum -= M;
    const double nm = norm(M);
    r.reconstruction_error = (nm > 0.0) ? norm(sum) / nm : norm(sum);

    const Field* parts[4] = {&r.st, &r.hess, &r.id_tilde, &r.trdivfree};
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) r.gram[a][b] = r.gram[b][a] = inner(*parts[a], *parts[b]);

    if (was_physical) {
        r.st = inverse_transform(r.st);
        r.hess = inverse_transform(r.hess);
        r.id_tilde = inverse_transform(r.id_tilde);
        r.trdivfree = inverse_transform(r.trdivfree);
    }
    return r;
}

// single-subspace closed-form projection
inline Field project_sym(const Field& M_in, SymSubspace which) {
    require_kind(M_in, FieldKind::sym_matrix, "project_sym");
    const bool was_physical = M_in.rep() == Rep::physical;
    const Field M = as_spectral(M_in);
    const Grid& g = M.grid();
    const int d = g.d, nc = M.ncomp();
    Field out(g, FieldKind::sym_matrix, Rep::spectral);
    int ix[4];
    double xihat[4];
    complexd st[10], he[10], id[10], td[10];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd* m = M.data() + p * nc;
        complexd* o = out.data() + p * nc;
        if (detail::unit_xi(g, ix, xihat))
            modekernel::decompose_sym_mode(m, xihat, d, st, he, id, td);
        else
            modekernel::decompose_sym_mean(m, d, st, he, id, td);
        const complexd* src = which == SymSubspace::st ? st
                              : which == SymSubspace::hess ? he
                              : which == SymSubspace::id_tilde ? id
                                                               : td;
        for (int c = 0; c < nc; ++c) o[c] = src[c];
    }
    return was_physical ? inverse_transform(out) : out;
}

inline Field project_st(const Field& M) { return project_sym(M, SymSubspace::st); }
inline Field project_hess(const Field& M) { return project_sym(M, SymSubspace::hess); }
inline Field project_id_tilde(const Field& M) { return project_sym(M, SymSubspace::id_tilde); }
inline Field project_trdivfree(const Field& M) { return project_sym(M, SymSubspace::trdivfree); }

// the span-matrix oracle as a field-level operation
inline Field brute_force_project(const Field& M_in, SymSubspace which) {
    require_kind(M_in, FieldKind::sym_matrix, "brute_force_project");
    const bool was_physical = M_in.rep() == Rep::physical;
    const Field M = as_spectral(M_in);
    const Grid& g = M.grid();
    const int nc = M.ncomp();
    Field out(g, FieldKind::sym_matrix, Rep::spectral);
    int ix[4];
    double xihat[4];
    complexd st[10], he[10], id[10], td[10];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd* m = M.data() + p * nc;
        complexd* o = out.data() + p * nc;
        if (detail::unit_xi(g, ix, xihat)) {
            modekernel::brute_force_sym_mode(m, mode_frame(xihat, g.d), which, o);
        } else {
            modekernel::decompose_sym_mean(m, g.d, st, he, id, td);
            const complexd* src = which == SymSubspace::st ? st
                                  : which == SymSubspace::hess ? he
                                  : which == SymSubspace::id_tilde ? id
                                                                   : td;
            for (int c = 0; c < nc; ++c) o[c] = src[c];
        }
    }
    return was_physical ? inverse_transform(out) : out;
}

struct AntisymDecompositionResult {
    Field vort, divfree;
    double cross_gram = 0.0;
    double reconstruction_error = 0.0;
};

inline AntisymDecompositionResult decompose_antisym(const Field& A_in) {
    require_kind(A_in, FieldKind::antisym_matrix, "decompose_antisym");
    const bool was_physical = A_in.rep() == Rep::physical;
    const Field A = as_spectral(A_in);
    const Grid& g = A.grid();
    const int nc = A.ncomp();
    AntisymDecompositionResult r{Field(g, FieldKind::antisym_matrix, Rep::spectral),
                                 Field(g, FieldKind::antisym_matrix, Rep::spectral)};
    int ix[4];
    double xihat[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd* a = A.data() + p * nc;
        complexd* vo = r.vort.data() + p * nc;
        complexd* df = r.divfree.data() + p * nc;
        if (detail::unit_xi(g, ix, xihat)) {
            modekernel::decompose_antisym_mode(a, xihat, g.d, vo, df);
        } else {
            for (int c = 0; c < nc; ++c) {
                vo[c] = complexd(0.0, 0.0);
                df[c] = a[c];
            }
        }
    }
    Field sum = r.vort;
    sum += r.divfree;
    sum -= A;
    const double na = norm(A);
    r.reconstruction_error = (na > 0.0) ? norm(sum) / na : norm(sum);
    r.cross_gram = inner(r.vort, r.divfree);
    if (was_physical) {
        r.vort = inverse_transform(r.vort);
        r.divfree = inverse_transform(r.divfree);
    }
    return r;
}

inline Field project_antisym(const Field& A_in, AntiSubspace which) {
    AntisymDecompositionResult r = decompose_antisym(A_in);
    return which == AntiSubspace::vort ? r.vort : r.divfree;
}

inline Field brute_force_project_antisym(const Field& A_in, AntiSubspace which) {
    require_kind(A_in, FieldKind::antisym_matrix, "brute_force_project_antisym");
    const bool was_physical = A_in.rep() == Rep::physical;
    const Field A = as_spectral(A_in);
    const Grid& g = A.grid();
    const int nc = A.ncomp();
    Field out(g, FieldKind::antisym_matrix, Rep::spectral);
    int ix[4];
    double xihat[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd* a = A.data() + p * nc;
        complexd* o = out.data() + p * nc;
        if (detail::unit_xi(g, ix, xihat)) {
            modekernel::brute_force_antisym_mode(a, mode_frame(xihat, g.d), which, o);
        } else {
            for (int c = 0; c < nc; ++c) o[c] = (which == AntiSubspace::divfree) ? a[c] : complexd(0.0, 0.0);
        }
    }
    return was_physical ? inverse_transform(out) : out;
}

// ---------------------------------------------------------------------------
// vector Helmholtz split (divergence-free + gradient parts)

struct HelmholtzResult {
    Field df, gr;
};

inline HelmholtzResult helmholtz_vector(const Field& u_in) {
    require_kind(u_in, FieldKind::vector, "helmholtz_vector");
    const bool was_physical = u_in.rep() == Rep::physical;
    const Field u = as_spectral(u_in);
    const Grid& g = u.grid();
    const int d = g.d;
    HelmholtzResult r{Field(g, FieldKind::vector, Rep::spectral), Field(g, FieldKind::vector, Rep::spectral)};
    int ix[4];
    double xihat[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        if (detail::unit_xi(g, ix, xihat)) {
            complexd s(0.0, 0.0);
            for (int a = 0; a < d; ++a) s += xihat[a] * u.at(p, a);
            for (int a = 0; a < d; ++a) {
                const complexd grv = s * xihat[a];
                r.gr.at(p, a) = grv;
                r.df.at(p, a) = u.at(p, a) - grv;
            }
        } else {
            // a constant vector field is divergence-free
            for (int a = 0; a < d; ++a) {
                r.df.at(p, a) = u.at(p, a);
                r.gr.at(p, a) = complexd(0.0, 0.0);
            }
        }
    }
    if (was_physical) {
        r.df = inverse_transform(r.df);
        r.gr = inverse_transform(r.gr);
    }
    return r;
}

inline Field project_divfree(const Field& u) { return helmholtz_vector(u).df; }

}  // namespace matfield
