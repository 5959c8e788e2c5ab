#pragma once
// Eigenvalue-geometry extremal machinery built around the max-mid
// parameterization A = lam/sqrt6 (I - 3 v (x) v):
//
//   * fixed_direction_value: the normalized strain-part energy of the
//     assembled field for a constant axis v, streamed mode by mode.  Its
//     mode-wise multiplier never exceeds 3/4 on the torus.
//   * near-maximizer families: a spectral-shell family (exact localization,
//     signed amplitude) and a positive Gaussian family (admissible amplitude,
//     approximate localization).  A divergence-free velocity family with the
//     same shell support feeds the diagonal-component bound.
//   * estimate_supremum: alternating projected ascent over (lam >= 0, |v|=1)
//     maximizing ||P_st(A)||^2 / ||lam||^2.  The lam half-step is an exact
//     line search along the PSD power direction (monotone); the v half-step
//     maximizes a pointwise linear surrogate that minorizes the objective
//     (monotone by the projection's convexity).
//   * rank_one_value: the same objective transported to rank-one fields
//     w (x) w with L^4 normalization.
//   * eigen_gap_check: the L^2 gap inequality ||lam3 - lam2+|| >=
//     (1-r)/sqrt2 ||S|| for strain fields, given an upper estimate r^2 of
//     the supremum.

#include <string>
#include <vector>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/eigenfield.hpp"
#include "matfield/fft.hpp"
#include "matfield/identities.hpp"
#include "matfield/rng.hpp"

namespace matfield {

namespace detail {

// packed symmetric (I - 3 v (x) v)/sqrt6 for a unit vector v
inline void maxmid_profile(const double* v, double* B) {
    const double s6 = 1.0 / std::sqrt(6.0);
    int idx = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j, ++idx) B[idx] = s6 * ((i == j ? 1.0 : 0.0) - 3.0 * v[i] * v[j]);
}

inline void require_unit3(const double* v, const char* where) {
    const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (std::abs(n2 - 1.0) > 1e-10) throw config_error(std::string(where) + ": axis must be a unit vector");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// fixed-direction objective: ||P_st(lam/sqrt6 (I - 3 v (x) v))||^2 / ||lam||^2
// for a constant unit axis v, streamed per mode without materializing the
// matrix field

inline double fixed_direction_value(const Field& lam_in, const double* v) {
    require_kind(lam_in, FieldKind::scalar, "fixed_direction_value");
    if (lam_in.grid().d != 3) throw config_error("fixed_direction_value: needs d = 3");
    detail::require_unit3(v, "fixed_direction_value");
    const Field lam = as_spectral(lam_in);
    const Grid& g = lam.grid();
    double B[6];
    detail::maxmid_profile(v, B);
    double w[6];
    for (int c = 0; c < 6; ++c) w[c] = component_weight(FieldKind::sym_matrix, 3, c);

    double num = 0.0, den = 0.0;
    int ix[4];
    double xihat[4];
    complexd M[6], st[6], he[6], id[6], td[6];
    for (std::size_t p = 0; p < g.points(); ++p) {
        const complexd lk = lam[p];
        const double a2 = std::norm(lk);
        if (a2 == 0.0) continue;
        den += a2;
        decode_point(p, g, ix);
        if (!detail::unit_xi(g, ix, xihat)) continue;  // the strain part has no mean mode
        for (int c = 0; c < 6; ++c) M[c] = lk * B[c];
        modekernel::decompose_sym_mode(M, xihat, 3, st, he, id, td);
        for (int c = 0; c < 6; ++c) num += w[c] * std::norm(st[c]);
    }
    if (den == 0.0) throw config_error("fixed_direction_value: zero amplitude field");
    return num / den;
}

// the diagonal-component ratio || v' S v ||^2 / ||S||^2 for a strain field S
inline double diag_component_bound_check(const Field& S_in, const double* v) {
    require_kind(S_in, FieldKind::sym_matrix, "diag_component_bound_check");
    if (S_in.grid().d != 3) throw config_error("diag_component_bound_check: needs d = 3");
    detail::require_unit3(v, "diag_component_bound_check");
    StrainResidual sr = check_strain_characterization(S_in);
    const double worst = std::max(sr.trace_res, sr.constraint_res);
    if (worst > 1e-8)
        throw precondition_error("diag_component_bound_check: input is not a strain field", worst);
    const Field S = as_physical(S_in);
    const Grid& g = S.grid();
    double num = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        complexd acc(0.0, 0.0);
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx) acc += (i == j ? 1.0 : 2.0) * v[i] * v[j] * S.at(p, idx);
        num += std::norm(acc);
    }
    num /= static_cast<double>(g.points());
    const double den = norm2(S);
    if (den == 0.0) throw config_error("diag_component_bound_check: zero field");
    return num / den;
}

// ---------------------------------------------------------------------------
// near-maximizer families

enum class NearMaxKind { shell, gaussian };

namespace detail {

inline bool in_shell(const double* xihat, const double* axis, double eps) {
    const double c = xihat[0] * axis[0] + xihat[1] * axis[1] + xihat[2] * axis[2];
    const double c2 = c * c;
    return c2 > 0.5 - 0.5 * eps && c2 < 0.5 + 0.5 * eps;
}

// smallest even n in [8, 512] whose mode lattice meets the shell, or 0
inline int min_shell_resolution(const double* axis, double eps) {
    for (int n = 8; n <= 512; n += 2) {
        Grid g;
        g.d = 3;
        g.n = n;
        g.L = 1.0;
        int ix[4];
        double xihat[4];
        for (std::size_t p = 1; p < g.points(); ++p) {
            decode_point(p, g, ix);
            bool nyq = false;
            for (int a = 0; a < 3; ++a)
                if (ix[a] == n / 2) nyq = true;
            if (nyq) continue;
            if (unit_xi(g, ix, xihat) && in_shell(xihat, axis, eps)) return n;
        }
    }
    return 0;
}

}  // namespace detail

// Construct a near-maximizing amplitude field against the constant axis
// v_axis.  shell: random real amplitude whose spectrum lives exactly where
// (v.xi_hat)^2 is within eps/2 of 1/2 — the amplitude is signed (no
// nonnegative function has a mean-free spectrum), so this family evaluates
// the objective but is not an admissible point of the nonnegative-amplitude
// problem.  gaussian: a strictly positive amplitude whose spectrum is an
// anisotropic Gaussian elongated along an axis at 45 degrees to v_axis
// (width parameter gaussian_width), which concentrates near the same shell
// as the width grows.
inline MaxMidField near_maximizer(const Grid& g, double eps, NearMaxKind kind, const double* v_axis,
                                  double gaussian_width = 64.0, std::uint64_t seed = 0) {
    if (g.d != 3) throw config_error("near_maximizer: needs d = 3");
    if (!(eps > 0.0 && eps < 1.0)) throw config_error("near_maximizer: eps must lie in (0,1)");
    detail::require_unit3(v_axis, "near_maximizer");

    Field lam_hat(g, FieldKind::scalar, Rep::spectral);
    int ix[4];
    double xihat[4];
    if (kind == NearMaxKind::shell) {
        std::size_t hits = 0;
        for (std::size_t p = 1; p < g.points(); ++p) {
            decode_point(p, g, ix);
            bool nyq = false;
            std::size_t pneg = 0;
            for (int a = 0; a < 3; ++a) {
                if (ix[a] == g.n / 2) nyq = true;
                pneg = pneg * g.n + static_cast<std::size_t>((g.n - ix[a]) % g.n);
            }
            if (nyq || pneg < p) continue;
            if (!detail::unit_xi(g, ix, xihat) || !detail::in_shell(xihat, v_axis, eps)) continue;
            const std::uint64_t key = detail::splitmix64(seed ^ (0x9e3779b97f4a7c15ULL + p));
            const double re = detail::uniform_pm1(key);
            const double im = (pneg == p) ? 0.0 : detail::uniform_pm1(~key);
            lam_hat[p] = complexd(re, im);
            lam_hat[pneg] = complexd(re, -im);
            ++hits;
        }
        if (hits == 0) {
            const int min_n = detail::min_shell_resolution(v_axis, eps);
            if (min_n > 0)
                throw config_error("near_maximizer: shell is empty at n = " + std::to_string(g.n) +
                                   "; minimum resolution for eps = " + std::to_string(eps) +
                                   " is n = " + std::to_string(min_n));
            throw config_error("near_maximizer: shell is empty at every supported resolution");
        }
    } else {
        // orthonormal triple with g3 at 45 degrees to the axis
        ModeFrame fr = mode_frame(v_axis, 3);
        double g1[3], g2[3], g3[3];
        for (int a = 0; a < 3; ++a) {
            g1[a] = fr.mu[0][a];
            g2[a] = (fr.mu[1][a] - v_axis[a]) / std::sqrt(2.0);
            g3[a] = (fr.mu[1][a] + v_axis[a]) / std::sqrt(2.0);
        }
        const double N = gaussian_width;
        if (!(N > 0.0)) throw config_error("near_maximizer: gaussian width must be positive");
        // Alias-fold the Gaussian onto the mode lattice: the grid values of
        // the inverse transform are then exact samples of a periodized
        // positive function, so the amplitude stays positive no matter how
        // slowly the wide spectral axis decays toward the lattice edge.  The
        // fold radius is chosen so the discarded tail sits below e^{-30}.
        const int jmax = std::min(
            6, std::max(1, static_cast<int>(std::ceil(g.L * std::sqrt(30.0 * N) / g.n - 0.5))));
        for (std::size_t p = 0; p < g.points(); ++p) {
            decode_point(p, g, ix);
            double acc = 0.0;
            for (int j1 = -jmax; j1 <= jmax; ++j1)
                for (int j2 = -jmax; j2 <= jmax; ++j2)
                    for (int j3 = -jmax; j3 <= jmax; ++j3) {
                        const double xi0 = (g.signed_mode(ix[0]) + j1 * g.n) / g.L;
                        const double xi1 = (g.signed_mode(ix[1]) + j2 * g.n) / g.L;
                        const double xi2 = (g.signed_mode(ix[2]) + j3 * g.n) / g.L;
                        const double q1 = xi0 * g1[0] + xi1 * g1[1] + xi2 * g1[2];
                        const double q2 = xi0 * g2[0] + xi1 * g2[1] + xi2 * g2[2];
                        const double q3 = xi0 * g3[0] + xi1 * g3[1] + xi2 * g3[2];
                        const double e = N * q1 * q1 + N * q2 * q2 + q3 * q3 / N;
                        if (e < 45.0) acc += std::exp(-e);
                    }
            lam_hat[p] = complexd(acc, 0.0);
        }
    }

    Field lam = inverse_transform(lam_hat);
    for (std::size_t p = 0; p < g.points(); ++p) lam[p] = complexd(lam[p].real(), 0.0);
    if (kind == NearMaxKind::gaussian) {
        // the true minimum of the periodized pancake profile lies far below
        // machine precision; a floor at 1e-9 of the peak keeps the discrete
        // representative strictly positive against transform roundoff
        const double floor = 1e-9 * max_abs(lam);
        for (std::size_t p = 0; p < g.points(); ++p)
            lam[p] = complexd(lam[p].real() + floor, 0.0);
    }
    const double nl = norm(lam);
    if (nl > 0.0) lam *= 1.0 / nl;

    MaxMidField mm{std::move(lam), Field(g, FieldKind::vector, Rep::physical)};
    for (std::size_t p = 0; p < g.points(); ++p)
        for (int a = 0; a < 3; ++a) mm.v.at(p, a) = complexd(v_axis[a], 0.0);
    return mm;
}

// Divergence-free velocity family with shell-localized spectrum and no
// azimuthal component about the axis: each shell mode carries
// u_hat = g_k (axis - (xi_par/rho) e_r) in the frame split by the axis.
// Feeds the diagonal-component bound, which it nearly saturates.
inline Field shell_velocity_family(const Grid& g, double eps, const double* v_axis, std::uint64_t seed = 0) {
    if (g.d != 3) throw config_error("shell_velocity_family: needs d = 3");
    if (!(eps > 0.0 && eps < 1.0)) throw config_error("shell_velocity_family: eps must lie in (0,1)");
    detail::require_unit3(v_axis, "shell_velocity_family");
    Field u(g, FieldKind::vector, Rep::spectral);
    int ix[4];
    double xihat[4];
    std::size_t hits = 0;
    for (std::size_t p = 1; p < g.points(); ++p) {
        decode_point(p, g, ix);
        bool nyq = false;
        std::size_t pneg = 0;
        for (int a = 0; a < 3; ++a) {
            if (ix[a] == g.n / 2) nyq = true;
            pneg = pneg * g.n + static_cast<std::size_t>((g.n - ix[a]) % g.n);
        }
        if (nyq || pneg < p) continue;
        if (!detail::unit_xi(g, ix, xihat) || !detail::in_shell(xihat, v_axis, eps)) continue;
        // split xi_hat = c * axis + rho * e_r with e_r the unit radial part
        const double c = xihat[0] * v_axis[0] + xihat[1] * v_axis[1] + xihat[2] * v_axis[2];
        double er[3];
        double rho = 0.0;
        for (int a = 0; a < 3; ++a) {
            er[a] = xihat[a] - c * v_axis[a];
            rho += er[a] * er[a];
        }
        rho = std::sqrt(rho);
        if (rho < 1e-12) continue;  // axis-parallel modes are outside the shell anyway
        for (int a = 0; a < 3; ++a) er[a] /= rho;
        // direction axis - (c/rho) e_r is orthogonal to xi_hat and even in k
        const std::uint64_t key = detail::splitmix64(seed ^ (0x7f4a7c159e3779b9ULL + p));
        const complexd amp(detail::uniform_pm1(key), (pneg == p) ? 0.0 : detail::uniform_pm1(~key));
        for (int a = 0; a < 3; ++a) {
            const double dir = v_axis[a] - (c / rho) * er[a];
            u.at(p, a) = amp * dir;
            u.at(pneg, a) = std::conj(amp) * dir;
        }
        ++hits;
    }
    if (hits == 0) {
        const int min_n = detail::min_shell_resolution(v_axis, eps);
        throw config_error("shell_velocity_family: shell is empty at n = " + std::to_string(g.n) +
                           (min_n > 0 ? "; minimum resolution is n = " + std::to_string(min_n) : ""));
    }
    const double nu = norm(u);
    u *= 1.0 / nu;
    return u;
}

// ---------------------------------------------------------------------------
// rank-one transport of the objective: (3/2) ||P_st(w (x) w)||^2 / ||w||_{L4}^4

inline double rank_one_value(const Field& w_in) {
    require_kind(w_in, FieldKind::vector, "rank_one_value");
    if (w_in.grid().d != 3) throw config_error("rank_one_value: needs d = 3");
    const Field w = as_physical(w_in);
    const Grid& g = w.grid();
    Field W(g, FieldKind::sym_matrix, Rep::physical);
    double l4 = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        double v[3];
        for (int a = 0; a < 3; ++a) v[a] = w.at(p, a).real();
        const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        l4 += n2 * n2;
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx) W.at(p, idx) = complexd(v[i] * v[j], 0.0);
    }
    l4 /= static_cast<double>(g.points());
    if (l4 == 0.0) throw config_error("rank_one_value: zero field");
    return 1.5 * norm2(project_st(W)) / l4;
}

// ---------------------------------------------------------------------------
// eigenvalue-gap inequality

struct EigenGapReport {
    double lhs = 0.0;  // || lam3 - max(0, lam2) ||_{L2}
    double rhs = 0.0;  // (1 - r)/sqrt2 ||S||_{L2}
    bool holds = true;
};

inline EigenGapReport eigen_gap_check(const Field& S_in, double r) {
    require_kind(S_in, FieldKind::sym_matrix, "eigen_gap_check");
    if (S_in.grid().d != 3) throw config_error("eigen_gap_check: needs d = 3");
    if (!(r >= 0.0 && r < 1.0)) throw config_error("eigen_gap_check: r must lie in [0,1)");
    StrainResidual sr = check_strain_characterization(S_in);
    const double worst = std::max(sr.trace_res, sr.constraint_res);
    if (worst > 1e-8) throw precondition_error("eigen_gap_check: input is not a strain field", worst);
    const Field S = as_physical(S_in);
    EigenGapReport rep;
    const double nS = norm(S);
    if (nS == 0.0) return rep;
    EigenField ef = eigen_decompose_field(S);
    double acc = 0.0;
    for (std::size_t p = 0; p < S.grid().points(); ++p) {
        const double gap = ef.lam3[p].real() - std::max(0.0, ef.lam2[p].real());
        acc += gap * gap;
    }
    rep.lhs = std::sqrt(acc / static_cast<double>(S.grid().points()));
    rep.rhs = (1.0 - r) / std::sqrt(2.0) * nS;
    rep.holds = rep.lhs >= rep.rhs - 1e-10;
    return rep;
}

// ---------------------------------------------------------------------------
// alternating projected ascent for the open supremum

enum class AscentMode { fixed_direction, plane_constrained, unconstrained };

struct AscentTracePoint {
    int iter = 0;
    double objective = 0.0;
    double step_size = 0.0;
};

struct SupremumEstimate {
    double value = 0.0;  // best objective found: an estimate of the squared supremum
    MaxMidField best;
    std::vector<std::vector<AscentTracePoint>> traces;  // one per restart
    Grid grid;
    int restarts = 0;
    bool converged = false;  // best restart met the relative-change stop rule
    std::string note;
};

namespace detail {

// objective pieces for amplitude fields a (>= 0) against a fixed direction
// field: K a = P_st(a B) with B(x) = (I - 3 v(x) (x) v(x))/sqrt6
inline Field apply_K(const Field& a, const Field& B) {
    const Grid& g = a.grid();
    Field A(g, FieldKind::sym_matrix, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double av = a[p].real();
        for (int c = 0; c < 6; ++c) A.at(p, c) = av * B.at(p, c);
    }
    return project_st(A);  // rep-preserving: physical in, physical out
}

// K* H = B . H pointwise (full-matrix pairing)
inline Field apply_Kstar(const Field& H, const Field& B) {
    const Grid& g = H.grid();
    Field out(g, FieldKind::scalar, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p) {
        double acc = 0.0;
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx)
                acc += (i == j ? 1.0 : 2.0) * B.at(p, idx).real() * H.at(p, idx).real();
        out[p] = complexd(acc, 0.0);
    }
    return out;
}

inline Field assemble_profile(const Field& v) {
    const Grid& g = v.grid();
    Field B(g, FieldKind::sym_matrix, Rep::physical);
    const double s6 = 1.0 / std::sqrt(6.0);
    for (std::size_t p = 0; p < g.points(); ++p) {
        double vv[3] = {v.at(p, 0).real(), v.at(p, 1).real(), v.at(p, 2).real()};
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j, ++idx)
                B.at(p, idx) = complexd(s6 * ((i == j ? 1.0 : 0.0) - 3.0 * vv[i] * vv[j]), 0.0);
    }
    return B;
}

// maximize q(t)/r(t) over t in [0,1] where q, r are the quadratics
// interpolating the objective numerator/denominator between a and a_new;
// both are convex combinations so feasibility is preserved
inline double best_interpolation(double qa, double qab, double qb, double ra, double rab, double rb) {
    // q(t) = (1-t)^2 qa + 2t(1-t) qab + t^2 qb, same for r
    auto value = [&](double t) {
        const double omt = 1.0 - t;
        const double q = omt * omt * qa + 2.0 * t * omt * qab + t * t * qb;
        const double r = omt * omt * ra + 2.0 * t * omt * rab + t * t * rb;
        return r > 0.0 ? q / r : 0.0;
    };
    // stationary points of q/r: (q' r - q r') = 0 is quadratic in t
    const double A2 = qb - 2.0 * qab + qa, B2 = qab - qa;  // q = A2 t^2 + 2 B2 t + qa
    const double C2 = rb - 2.0 * rab + ra, D2 = rab - ra;
    // numerator of derivative: (A2 t + B2)(C2 t^2 + 2 D2 t + ra) - (A2 t^2 + 2 B2 t + qa)(C2 t + D2)
    // expands to a quadratic a t^2 + b t + c
    const double a = A2 * D2 - B2 * C2;
    const double b = A2 * ra - qa * C2;
    const double c = B2 * ra - qa * D2;
    double best_t = 1.0, best_v = value(1.0);
    const double v0 = value(0.0);
    if (v0 > best_v) {
        best_v = v0;
        best_t = 0.0;
    }
    const double disc = b * b - 4.0 * a * c;
    if (std::abs(a) > 1e-300 && disc >= 0.0) {
        for (double sgn : {-1.0, 1.0}) {
            const double t = (-b + sgn * std::sqrt(disc)) / (2.0 * a);
            if (t > 0.0 && t < 1.0 && value(t) > best_v) {
                best_v = value(t);
                best_t = t;
            }
        }
    } else if (std::abs(a) <= 1e-300 && std::abs(b) > 1e-300) {
        const double t = -c / b;
        if (t > 0.0 && t < 1.0 && value(t) > best_v) {
            best_v = value(t);
            best_t = t;
        }
    }
    return best_t;
}

}  // namespace detail

// one alternating-ascent trajectory from the given start; appends trace rows
inline double ascend_maxmid(Field& lam, Field& v, AscentMode mode, int max_iters, double rel_tol,
                            std::vector<AscentTracePoint>& trace, bool& converged) {
    const Grid& g = lam.grid();
    auto normalize_lam = [&](Field& a) {
        const double n = norm(a);
        if (n > 0.0) a *= 1.0 / n;
    };
    normalize_lam(lam);
    Field B = detail::assemble_profile(v);
    Field G = detail::apply_K(lam, B);  // P_st of the assembled field
    double obj = norm2(G);              // ||lam|| = 1
    trace.push_back({0, obj, 0.0});
    converged = false;

    for (int it = 1; it <= max_iters; ++it) {
        const double prev = obj;
        double step = 0.0;

        // ---- amplitude half-step: exact line search toward max(0, K*K lam)
        {
            Field dir = detail::apply_Kstar(G, B);
            for (std::size_t p = 0; p < g.points(); ++p)
                dir[p] = complexd(std::max(0.0, dir[p].real()), 0.0);
            const double nd = norm(dir);
            if (nd > 0.0) {
                dir *= 1.0 / nd;
                Field Gd = detail::apply_K(dir, B);
                const double qa = obj;
                const double qb = norm2(Gd);
                const double qab = inner(G, Gd);
                const double ra = 1.0, rb = 1.0;
                const double rab = inner(lam, dir);
                const double t = detail::best_interpolation(qa, qab, qb, ra, rab, rb);
                if (t > 0.0) {
                    lam *= (1.0 - t);
                    axpy(lam, t, dir);
                    normalize_lam(lam);
                    G = detail::apply_K(lam, B);
                    obj = norm2(G);
                    step = t;
                }
            }
        }

        // ---- direction half-step: pointwise minimizing eigenvector of G
        if (mode != AscentMode::fixed_direction) {
            Field v_new = v;
            for (std::size_t p = 0; p < g.points(); ++p) {
                if (lam[p].real() <= 1e-14) continue;  // direction is irrelevant there
                double m[6];
                for (int c = 0; c < 6; ++c) m[c] = G.at(p, c).real();
                if (mode == AscentMode::plane_constrained) {
                    // exact minimizer within the (e2, e3) plane: 2x2 form
                    const double a = m[3], bq = m[4], cq = m[5];
                    const double tr2 = 0.5 * (a + cq);
                    const double det = a * cq - bq * bq;
                    const double disc = std::sqrt(std::max(0.0, tr2 * tr2 - det));
                    const double lmin = tr2 - disc;
                    double w2 = bq, w3 = lmin - a;
                    double nn = std::hypot(w2, w3);
                    if (nn < 1e-14) {
                        w2 = (a <= cq) ? 1.0 : 0.0;
                        w3 = (a <= cq) ? 0.0 : 1.0;
                        nn = 1.0;
                    }
                    v_new.at(p, 0) = complexd(0.0, 0.0);
                    v_new.at(p, 1) = complexd(w2 / nn, 0.0);
                    v_new.at(p, 2) = complexd(w3 / nn, 0.0);
                } else {
                    Eigen3 e = sym_eigen3(m);
                    for (int a = 0; a < 3; ++a) v_new.at(p, a) = complexd(e.vec[0][a], 0.0);
                }
            }
            v = std::move(v_new);
            B = detail::assemble_profile(v);
            G = detail::apply_K(lam, B);
            obj = norm2(G);
        }

        trace.push_back({it, obj, step});
        if (obj - prev < 1e-12 || (prev > 0.0 && (obj - prev) / prev < rel_tol)) {
            converged = true;
            break;
        }
    }
    return obj;
}

// Multi-restart estimator for the supremum of the nonnegative-amplitude
// objective.  Restart 0 warm-starts from the lattice-plane ridge indicator
// (the discrete optimizer of the fixed-direction problem); the rest are
// random smooth fields.
inline SupremumEstimate estimate_supremum(const Grid& g, int restarts, int max_iters, AscentMode mode,
                                          std::uint64_t seed = 0, double rel_tol = 1e-9) {
    if (g.d != 3) throw config_error("estimate_supremum: needs d = 3");
    if (restarts < 1 || max_iters < 1) throw config_error("estimate_supremum: needs restarts, iters >= 1");
    SupremumEstimate est;
    est.grid = g;
    est.restarts = restarts;
    if (mode == AscentMode::plane_constrained)
        est.note =
            "directions constrained to the (e2,e3) plane: no nonnegative-amplitude fixed point exists; "
            "the value is reported for comparison only";
    if (mode == AscentMode::unconstrained)
        est.note =
            "empirical estimate: the best objective observed over finitely many ascent restarts at "
            "finite resolution, not a proven bound";

    for (int r = 0; r < restarts; ++r) {
        Field lam(g, FieldKind::scalar, Rep::physical);
        Field v(g, FieldKind::vector, Rep::physical);
        if (r == 0) {
            // ridge indicator on the lattice plane x2 + x3 = 0 (mod L); its
            // spectrum is flat on the line k = (0, m, m), where the
            // fixed-direction multiplier sits at its maximum
            int ix[4];
            for (std::size_t p = 0; p < g.points(); ++p) {
                decode_point(p, g, ix);
                lam[p] = complexd(((ix[1] + ix[2]) % g.n == 0) ? 1.0 : 0.0, 0.0);
                v.at(p, 2) = complexd(1.0, 0.0);
            }
        } else {
            Field noise = as_physical(random_field(g, FieldKind::scalar, 1.5, seed + 1000 * r));
            const double scale = std::max(1e-12, max_abs(noise));
            for (std::size_t p = 0; p < g.points(); ++p)
                lam[p] = complexd(std::max(0.0, 1.0 + noise[p].real() / scale), 0.0);
            Field dirs = as_physical(random_field(g, FieldKind::vector, 1.5, seed + 1000 * r + 1));
            for (std::size_t p = 0; p < g.points(); ++p) {
                double w[3], n2 = 0.0;
                for (int a = 0; a < 3; ++a) {
                    w[a] = dirs.at(p, a).real();
                    n2 += w[a] * w[a];
                }
                if (n2 < 1e-20) {
                    w[0] = w[1] = 0.0;
                    w[2] = 1.0;
                    n2 = 1.0;
                }
                const double inv = 1.0 / std::sqrt(n2);
                for (int a = 0; a < 3; ++a) v.at(p, a) = complexd(w[a] * inv, 0.0);
            }
            if (mode == AscentMode::plane_constrained)
                for (std::size_t p = 0; p < g.points(); ++p) {
                    double w2 = v.at(p, 1).real(), w3 = v.at(p, 2).real();
                    double nn = std::hypot(w2, w3);
                    if (nn < 1e-12) {
                        w2 = 0.0;
                        w3 = 1.0;
                        nn = 1.0;
                    }
                    v.at(p, 0) = complexd(0.0, 0.0);
                    v.at(p, 1) = complexd(w2 / nn, 0.0);
                    v.at(p, 2) = complexd(w3 / nn, 0.0);
                }
        }
        if (mode == AscentMode::fixed_direction)
            for (std::size_t p = 0; p < g.points(); ++p) {
                v.at(p, 0) = complexd(0.0, 0.0);
                v.at(p, 1) = complexd(0.0, 0.0);
                v.at(p, 2) = complexd(1.0, 0.0);
            }

        est.traces.emplace_back();
        bool conv = false;
        const double val = ascend_maxmid(lam, v, mode, max_iters, rel_tol, est.traces.back(), conv);
        if (val > est.value) {
            est.value = val;
            est.best = MaxMidField{std::move(lam), std::move(v)};
            est.converged = conv;
        }
    }
    return est;
}

}  // namespace matfield
