#pragma once
// Spectral differential calculus on periodic fields.
//
// All operators act on spectral-representation fields and return spectral
// fields.  First derivatives multiply by 2 pi i k_a / L and zero the Nyquist
// plane k_a = n/2 (an odd multiplier cannot be represented there for a real
// field).  Inverse Laplacian powers act as (4 pi^2 |k/L|^2)^{-s} and always
// map the mean mode to zero.
//
// Matrix gradient convention: (grad u)_ij = d_i u_j.

#include "matfield/core.hpp"

namespace matfield {

namespace detail {

// Nyquist-zeroed first-derivative multiplier for axis index i: 2 pi xi (times i)
inline double deriv_mult(const Grid& g, int i) {
    if (i == g.n / 2) return 0.0;
    return two_pi * g.xi(i);
}

}  // namespace detail

// d/dx_axis
inline Field derivative(const Field& f, int axis) {
    require_rep(f, Rep::spectral, "derivative");
    if (axis < 0 || axis >= f.grid().d) throw config_error("derivative: axis out of range");
    const Grid& g = f.grid();
    Field out = f;
    const int nc = f.ncomp();
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const double m = detail::deriv_mult(g, ix[axis]);
        for (int c = 0; c < nc; ++c) {
            const complexd v = out.at(p, c);
            out.at(p, c) = complexd(-m * v.imag(), m * v.real());  // * (i m)
        }
    }
    return out;
}

// (-Laplacian)^s; the mean mode maps to zero for every s (in particular this
// is the inverse Laplacian for s = -1 and its half-integer relatives).
inline Field neg_laplacian_pow(const Field& f, double s) {
    require_rep(f, Rep::spectral, "neg_laplacian_pow");
    const Grid& g = f.grid();
    Field out = f;
    const int nc = f.ncomp();
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double xi2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double x = g.xi(ix[a]);
            xi2 += x * x;
        }
        const double m = (xi2 == 0.0) ? 0.0 : std::pow(4.0 * pi * pi * xi2, s);
        for (int c = 0; c < nc; ++c) out.at(p, c) *= m;
    }
    return out;
}

// order in {1/2, 1, 3/2}: (-Laplacian)^{-order}, mean mode -> 0
inline Field inverse_laplacian(const Field& f, double order = 1.0) {
    if (!(order > 0.0)) throw config_error("inverse_laplacian: order must be positive");
    return neg_laplacian_pow(f, -order);
}

// ---------------------------------------------------------------------------
// first-order vector/matrix operators

// div u (vector -> scalar)
inline Field divergence_scalar(const Field& u) {
    require_kind(u, FieldKind::vector, "divergence_scalar");
    require_rep(u, Rep::spectral, "divergence_scalar");
    const Grid& g = u.grid();
    Field out(g, FieldKind::scalar, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        complexd acc(0.0, 0.0);
        for (int a = 0; a < g.d; ++a) {
            const double m = detail::deriv_mult(g, ix[a]);
            const complexd v = u.at(p, a);
            acc += complexd(-m * v.imag(), m * v.real());
        }
        out.at(p, 0) = acc;
    }
    return out;
}

// grad f (scalar -> vector)
inline Field gradient(const Field& f) {
    require_kind(f, FieldKind::scalar, "gradient");
    require_rep(f, Rep::spectral, "gradient");
    const Grid& g = f.grid();
    Field out(g, FieldKind::vector, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const complexd v = f.at(p, 0);
        for (int a = 0; a < g.d; ++a) {
            const double m = detail::deriv_mult(g, ix[a]);
            out.at(p, a) = complexd(-m * v.imag(), m * v.real());
        }
    }
    return out;
}

// (div M)_i = sum_j d_j M_ij  (symmetric or antisymmetric matrix -> vector)
inline Field divergence(const Field& M) {
    require_rep(M, Rep::spectral, "divergence");
    const Grid& g = M.grid();
    const int d = g.d;
    const bool sym = M.kind() == FieldKind::sym_matrix;
    if (!sym && M.kind() != FieldKind::antisym_matrix)
        throw config_error("divergence: expected a matrix field");
    Field out(g, FieldKind::vector, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double m[4];
        for (int a = 0; a < d; ++a) m[a] = detail::deriv_mult(g, ix[a]);
        for (int i = 0; i < d; ++i) {
            complexd acc(0.0, 0.0);
            for (int j = 0; j < d; ++j) {
                complexd v;
                if (sym) {
                    v = (i <= j) ? M.at(p, sym_index(i, j, d)) : M.at(p, sym_index(j, i, d));
                } else {
                    if (i == j) continue;
                    v = (i < j) ? M.at(p, antisym_index(i, j, d)) : -M.at(p, antisym_index(j, i, d));
                }
                acc += complexd(-m[j] * v.imag(), m[j] * v.real());
            }
            out.at(p, i) = acc;
        }
    }
    return out;
}

// symmetric gradient (vector -> symmetric matrix): (1/2)(d_i u_j + d_j u_i)
inline Field sym_gradient(const Field& u) {
    require_kind(u, FieldKind::vector, "sym_gradient");
    require_rep(u, Rep::spectral, "sym_gradient");
    const Grid& g = u.grid();
    const int d = g.d;
    Field out(g, FieldKind::sym_matrix, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double m[4];
        for (int a = 0; a < d; ++a) m[a] = detail::deriv_mult(g, ix[a]);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                const complexd ui = u.at(p, i), uj = u.at(p, j);
                const double re = -0.5 * (m[i] * uj.imag() + m[j] * ui.imag());
                const double im = 0.5 * (m[i] * uj.real() + m[j] * ui.real());
                out.at(p, sym_index(i, j, d)) = complexd(re, im);
            }
    }
    return out;
}

// antisymmetric gradient (vector -> antisymmetric matrix): (1/2)(d_i u_j - d_j u_i)
inline Field antisym_gradient(const Field& u) {
    require_kind(u, FieldKind::vector, "antisym_gradient");
    require_rep(u, Rep::spectral, "antisym_gradient");
    const Grid& g = u.grid();
    const int d = g.d;
    Field out(g, FieldKind::antisym_matrix, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double m[4];
        for (int a = 0; a < d; ++a) m[a] = detail::deriv_mult(g, ix[a]);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const complexd ui = u.at(p, i), uj = u.at(p, j);
                const double re = -0.5 * (m[i] * uj.imag() - m[j] * ui.imag());
                const double im = 0.5 * (m[i] * uj.real() - m[j] * ui.real());
                out.at(p, antisym_index(i, j, d)) = complexd(re, im);
            }
    }
    return out;
}

// curl (vector -> vector, d = 3 only)
inline Field curl(const Field& u) {
    require_kind(u, FieldKind::vector, "curl");
    require_rep(u, Rep::spectral, "curl");
    const Grid& g = u.grid();
    if (g.d != 3) throw config_error("curl: defined for d = 3 only");
    Field out(g, FieldKind::vector, Rep::spectral);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double m[3];
        for (int a = 0; a < 3; ++a) m[a] = detail::deriv_mult(g, ix[a]);
        const complexd u0 = u.at(p, 0), u1 = u.at(p, 1), u2 = u.at(p, 2);
        // (curl u)_i = eps_ijk d_j u_k, with d_j = i m_j
        auto id = [](double mj, const complexd& v) { return complexd(-mj * v.imag(), mj * v.real()); };
        out.at(p, 0) = id(m[1], u2) - id(m[2], u1);
        out.at(p, 1) = id(m[2], u0) - id(m[0], u2);
        out.at(p, 2) = id(m[0], u1) - id(m[1], u0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// axial-vector correspondence for antisymmetric matrices, d = 3
//
//        ( 0    w3  -w2 )
//   A =  (-w3   0    w1 ),   A v = v x w,   div A = -curl w.
//        ( w2  -w1   0  )

inline Field antisym_to_axial(const Field& A) {
    require_kind(A, FieldKind::antisym_matrix, "antisym_to_axial");
    if (A.grid().d != 3) throw config_error("antisym_to_axial: d = 3 only");
    Field w(A.grid(), FieldKind::vector, A.rep());
    for (std::size_t p = 0; p < A.points(); ++p) {
        w.at(p, 0) = A.at(p, antisym_index(1, 2, 3));   //  A23
        w.at(p, 1) = -A.at(p, antisym_index(0, 2, 3));  // -A13
        w.at(p, 2) = A.at(p, antisym_index(0, 1, 3));   //  A12
    }
    return w;
}

inline Field axial_to_antisym(const Field& w) {
    require_kind(w, FieldKind::vector, "axial_to_antisym");
    if (w.grid().d != 3) throw config_error("axial_to_antisym: d = 3 only");
    Field A(w.grid(), FieldKind::antisym_matrix, w.rep());
    for (std::size_t p = 0; p < w.points(); ++p) {
        A.at(p, antisym_index(0, 1, 3)) = w.at(p, 2);
        A.at(p, antisym_index(0, 2, 3)) = -w.at(p, 1);
        A.at(p, antisym_index(1, 2, 3)) = w.at(p, 0);
    }
    return A;
}

// ---------------------------------------------------------------------------
// misc spectral helpers

// zero every mode with any |k_a| > n/3 (2/3-rule dealiasing)
inline void dealias(Field& f) {
    require_rep(f, Rep::spectral, "dealias");
    const Grid& g = f.grid();
    const int kmax = g.n / 3;
    const int nc = f.ncomp();
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        bool cut = false;
        for (int a = 0; a < g.d; ++a)
            if (std::abs(g.signed_mode(ix[a])) > kmax) { cut = true; break; }
        if (cut)
            for (int c = 0; c < nc; ++c) f.at(p, c) = complexd(0.0, 0.0);
    }
}

// zero the mean (mode-0) value of every component
inline void zero_mean(Field& f) {
    require_rep(f, Rep::spectral, "zero_mean");
    for (int c = 0; c < f.ncomp(); ++c) f.at(0, c) = complexd(0.0, 0.0);
}

// trace of a symmetric matrix field, componentwise
inline Field trace_field(const Field& M) {
    require_kind(M, FieldKind::sym_matrix, "trace_field");
    const Grid& g = M.grid();
    Field out(g, FieldKind::scalar, M.rep());
    for (std::size_t p = 0; p < M.points(); ++p) {
        complexd t(0.0, 0.0);
        for (int i = 0; i < g.d; ++i) t += M.at(p, sym_index(i, i, g.d));
        out.at(p, 0) = t;
    }
    return out;
}

}  // namespace matfield
