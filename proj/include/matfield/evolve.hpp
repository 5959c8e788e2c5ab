// Mild-solution time integration for the incompressible velocity flow and its
// conjugate symmetric-matrix-potential flow, plus a viscous Hamilton-Jacobi
// validator with a closed-form reference solution.
//
// Scheme: integrating-factor (Lawson) RK4.  The heat semigroup is applied
// exactly per mode, explicit RK4 handles the transformed nonlinearity, and the
// quadratic terms are 2/3-dealiased.  The dissipation integral is accumulated
// with the same stage quadrature, so the energy-balance defect shrinks at the
// integrator's order.
//
// The two flows are images of one another under the exact spectral map
// M = 2 grad_sym (-lap)^{-1} u, u = -div M: the map commutes with the heat
// factor and intertwines the dealiased nonlinearities, so the discrete
// trajectories agree to rounding at any step size (not merely to O(dt^4)).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/fft.hpp"
#include "matfield/identities.hpp"

namespace matfield {

// ---------------------------------------------------------------------------
// trajectory bookkeeping

// Mean-square energy bookkeeping per sample instant, in matrix-potential
// units: kinetic = ||div M||^2 = ||u||^2 and the dissipation integral
// accumulates nu * ||lap M||^2 = 2 nu * ||grad u||^2 (the viscosity is folded
// into the integrand so that kinetic + dissipation_integral - initial is the
// energy-balance defect for every nu).
struct EnergyLedger {
    std::vector<double> kinetic;
    std::vector<double> dissipation_integral;
    double initial = 0.0;
};

struct Trajectory {
    std::vector<double> times;  // sample instants, strictly increasing, starts at 0
    std::vector<Field> states;  // sampled states, spectral representation
    EnergyLedger ledger;

    // per sample: constraint residual of the stored state (matrix form: worst
    // strain-characterization residual; velocity form: relative divergence)
    std::vector<double> constraint_residuals;
    // per sample: relative size of the re-projection applied before storing
    std::vector<double> drift_corrections;

    // heuristic lifespan scale 1 / ||lap M0||^4 (logged, never enforced)
    double lifespan_hint = std::numeric_limits<double>::infinity();

    bool diverged = false;
    double last_valid_time = 0.0;
    std::string divergence_note;
    std::vector<std::string> notes;  // advisory log (CFL margins etc.)
};

inline double energy_defect(const EnergyLedger& led, std::size_t i) {
    return std::abs(led.kinetic.at(i) + led.dissipation_integral.at(i) - led.initial);
}

// ---------------------------------------------------------------------------
// velocity <-> potential conversion

// M = 2 grad_sym (-lap)^{-1} u for divergence-free mean-zero u; -div M = u.
inline Field potential_from_velocity(const Field& u_in) {
    require_kind(u_in, FieldKind::vector, "potential_from_velocity");
    const Field u = as_spectral(u_in);
    const double nu_ = norm(u);
    if (nu_ > 0.0) {
        const double div_res = norm(divergence_scalar(u)) / nu_;
        if (div_res > 1e-10)
            throw precondition_error("potential_from_velocity: input not divergence-free", div_res);
        double mean = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) mean = std::max(mean, std::abs(u.at(0, c)));
        if (mean > 1e-10 * nu_)
            throw precondition_error("potential_from_velocity: input not mean-zero", mean);
    }
    Field M = sym_gradient(inverse_laplacian(u));
    M *= 2.0;
    return u_in.rep() == Rep::physical ? as_physical(M) : M;
}

// u = -div M
inline Field velocity_from_potential(const Field& M_in) {
    require_kind(M_in, FieldKind::sym_matrix, "velocity_from_potential");
    Field u = divergence(as_spectral(M_in));
    u *= -1.0;
    return M_in.rep() == Rep::physical ? as_physical(u) : u;
}

// ---------------------------------------------------------------------------
// integrator internals

namespace detail {

// per-mode exact heat factors e^{-nu 4 pi^2 |xi|^2 dt/2} and ...dt
struct HeatFactors {
    std::vector<double> half, full;
};

inline HeatFactors make_heat_factors(const Grid& g, double nu, double dt) {
    HeatFactors hf;
    hf.half.resize(g.points());
    hf.full.resize(g.points());
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double xi2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double x = g.xi(ix[a]);
            xi2 += x * x;
        }
        const double theta = nu * 4.0 * pi * pi * xi2 * dt;
        hf.half[p] = std::exp(-0.5 * theta);
        hf.full[p] = std::exp(-theta);
    }
    return hf;
}

inline void apply_factor(Field& f, const std::vector<double>& fac) {
    const int nc = f.ncomp();
    for (std::size_t p = 0; p < f.points(); ++p)
        for (int c = 0; c < nc; ++c) f.at(p, c) *= fac[p];
}

// instantaneous dissipation rate in matrix-potential units:
//   vector u:     2 nu sum 4 pi^2 |xi|^2 |u^|^2   (= nu ||lap M||^2)
//   sym matrix M:   nu sum (4 pi^2 |xi|^2)^2 |M^|^2 (weighted)
inline double dissipation_rate(const Field& f, double nu) {
    const Grid& g = f.grid();
    const int nc = f.ncomp();
    const bool second_order = f.kind() == FieldKind::sym_matrix;
    double w[16];
    for (int c = 0; c < nc; ++c) w[c] = component_weight(f.kind(), g.d, c);
    double acc = 0.0;
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double xi2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double x = g.xi(ix[a]);
            xi2 += x * x;
        }
        double m = 4.0 * pi * pi * xi2;
        if (second_order) m *= m;
        else m *= 2.0;
        for (int c = 0; c < nc; ++c) acc += m * w[c] * std::norm(f.at(p, c));
    }
    return nu * acc;
}

// -P_df div(u (x) u), dealiased; input/output spectral
inline Field nonlin_velocity(const Field& u_spec) {
    const Grid& g = u_spec.grid();
    const Field up = inverse_transform(u_spec);
    Field H(g, FieldKind::sym_matrix, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p)
        for (int i = 0; i < g.d; ++i)
            for (int j = i; j < g.d; ++j)
                H.at(p, sym_index(i, j, g.d)) =
                    complexd(up.at(p, i).real() * up.at(p, j).real(), 0.0);
    H = forward_transform(H);
    dealias(H);
    Field w = project_divfree(divergence(H));
    w *= -1.0;
    return w;
}

// +P_st(div M (x) div M), dealiased; input/output spectral
inline Field nonlin_potential(const Field& M_spec) {
    const Grid& g = M_spec.grid();
    const Field wp = inverse_transform(divergence(M_spec));
    Field H(g, FieldKind::sym_matrix, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p)
        for (int i = 0; i < g.d; ++i)
            for (int j = i; j < g.d; ++j)
                H.at(p, sym_index(i, j, g.d)) =
                    complexd(wp.at(p, i).real() * wp.at(p, j).real(), 0.0);
    H = forward_transform(H);
    dealias(H);
    return project_st(H);
}

// |grad f|^2, dealiased; input/output spectral
inline Field nonlin_hamilton_jacobi(const Field& f_spec) {
    const Grid& g = f_spec.grid();
    const Field gr = inverse_transform(gradient(f_spec));
    Field q(g, FieldKind::scalar, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p) {
        double s = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double v = gr.at(p, a).real();
            s += v * v;
        }
        q.at(p, 0) = complexd(s, 0.0);
    }
    q = forward_transform(q);
    dealias(q);
    return q;
}

// largest pointwise euclidean magnitude of a physical field
inline double max_pointwise_norm(const Field& f) {
    const int nc = f.ncomp();
    double m2 = 0.0;
    for (std::size_t p = 0; p < f.points(); ++p) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
            const double v = f.at(p, c).real();
            s += v * v;
        }
        m2 = std::max(m2, s);
    }
    return std::sqrt(m2);
}

// transport speed of the quadratic term: |u|, |div M| or |grad f|
inline double max_speed(const Field& state_spec) {
    switch (state_spec.kind()) {
        case FieldKind::vector: return max_pointwise_norm(inverse_transform(state_spec));
        case FieldKind::sym_matrix:
            return max_pointwise_norm(inverse_transform(divergence(state_spec)));
        case FieldKind::scalar:
            return max_pointwise_norm(inverse_transform(gradient(state_spec)));
        default: throw config_error("max_speed: unsupported field kind");
    }
}

// One Lawson-RK4 step of d/dt s = nu lap s + N(s).  Stage values sit at
// t, t+dt/2, t+dt/2, t+dt; the same stages feed the dissipation quadrature
// (classical RK4 applied to the augmented integral), so the accumulated
// integral carries the scheme's full order.
template <class NonlinFn>
Field lawson_rk4_step(const Field& s0, double dt, const HeatFactors& hf, NonlinFn&& nonlin,
                      double nu, double* dissipation_increment) {
    const Field k1 = nonlin(s0);

    Field a = s0;
    axpy(a, 0.5 * dt, k1);
    apply_factor(a, hf.half);
    Field k2 = nonlin(a);

    Field b = s0;
    apply_factor(b, hf.half);
    axpy(b, 0.5 * dt, k2);
    const Field k3 = nonlin(b);

    Field c = s0;
    apply_factor(c, hf.full);
    {
        Field ek3 = k3;
        apply_factor(ek3, hf.half);
        axpy(c, dt, ek3);
    }
    const Field k4 = nonlin(c);

    if (dissipation_increment) {
        *dissipation_increment =
            (dt / 6.0) * (dissipation_rate(s0, nu) + 2.0 * dissipation_rate(a, nu) +
                          2.0 * dissipation_rate(b, nu) + dissipation_rate(c, nu));
    }

    // s1 = E(dt) (s0 + dt/6 k1) + dt/3 E(dt/2) (k2 + k3) + dt/6 k4
    Field s1 = s0;
    axpy(s1, dt / 6.0, k1);
    apply_factor(s1, hf.full);
    k2 += k3;
    apply_factor(k2, hf.half);
    axpy(s1, dt / 3.0, k2);
    axpy(s1, dt / 6.0, k4);
    return s1;
}

inline Field nonlin_for(const Field& state) {
    switch (state.kind()) {
        case FieldKind::vector: return nonlin_velocity(state);
        case FieldKind::sym_matrix: return nonlin_potential(state);
        case FieldKind::scalar: return nonlin_hamilton_jacobi(state);
        default: throw config_error("nonlin_for: unsupported field kind");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// step-size rule

// hard advective cap: dt <= 0.5 dx / max transport speed
inline double cfl_limit(const Field& state) {
    const Field s = as_spectral(state);
    const double speed = detail::max_speed(s);
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * state.grid().dx() / speed;
}

// advisory diffusive scale: 0.5 (3/2 dx)^2 / nu -- the smallest surviving
// wavelength after 2/3 dealiasing; the heat factor is exact, so this is a
// resolution hint rather than a stability bound
inline double diffusive_advisory_limit(const Grid& g, double nu) {
    const double h = 1.5 * g.dx();
    return 0.5 * h * h / nu;
}

namespace detail {

inline void require_step_args(double dt, double nu, const char* where) {
    if (!(dt > 0.0)) throw config_error(std::string(where) + ": dt must be positive");
    if (!(nu > 0.0)) throw config_error(std::string(where) + ": nu must be positive");
}

inline void require_cfl(const Field& state_spec, double dt, const char* where) {
    const double cap = 0.5 * state_spec.grid().dx() / std::max(max_speed(state_spec), 1e-300);
    if (dt > cap)
        throw config_error(std::string(where) + ": CFL violation, dt = " + std::to_string(dt) +
                           " exceeds 0.5 dx/max speed = " + std::to_string(cap));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// single steps

inline Field step_velocity(const Field& u_in, double dt, double nu = 1.0) {
    require_kind(u_in, FieldKind::vector, "step_velocity");
    detail::require_step_args(dt, nu, "step_velocity");
    const Field u = as_spectral(u_in);
    const double n0 = norm(u);
    if (n0 > 0.0) {
        const double div_res = norm(divergence_scalar(u)) / n0;
        if (div_res > 1e-10)
            throw precondition_error("step_velocity: input not divergence-free", div_res);
    }
    detail::require_cfl(u, dt, "step_velocity");
    const detail::HeatFactors hf = detail::make_heat_factors(u.grid(), nu, dt);
    Field u1 = detail::lawson_rk4_step(u, dt, hf, detail::nonlin_velocity, nu, nullptr);
    return u_in.rep() == Rep::physical ? as_physical(u1) : u1;
}

inline Field step_potential(const Field& M_in, double dt, double nu = 1.0) {
    require_kind(M_in, FieldKind::sym_matrix, "step_potential");
    if (M_in.grid().d != 3) throw config_error("step_potential: needs d = 3");
    detail::require_step_args(dt, nu, "step_potential");
    const Field M = as_spectral(M_in);
    if (norm(M) > 0.0) {
        const StrainResidual r = check_strain_characterization(M);
        const double worst = std::max(r.trace_res, r.constraint_res);
        if (worst > 1e-8)
            throw precondition_error("step_potential: input not a strain-form field", worst);
    }
    detail::require_cfl(M, dt, "step_potential");
    const detail::HeatFactors hf = detail::make_heat_factors(M.grid(), nu, dt);
    Field M1 = detail::lawson_rk4_step(M, dt, hf, detail::nonlin_potential, nu, nullptr);
    return M_in.rep() == Rep::physical ? as_physical(M1) : M1;
}

// ---------------------------------------------------------------------------
// full trajectories

inline Trajectory evolve(const Field& init, double T, double dt, int sample_every,
                         double nu = 1.0) {
    const FieldKind kind = init.kind();
    if (kind != FieldKind::vector && kind != FieldKind::sym_matrix)
        throw config_error("evolve: init must be a velocity or a symmetric matrix field");
    if (init.grid().d != 3) throw config_error("evolve: needs d = 3");
    detail::require_step_args(dt, nu, "evolve");
    if (!(T > 0.0)) throw config_error("evolve: T must be positive");
    if (sample_every < 1) throw config_error("evolve: sample_every must be >= 1");

    const Grid& g = init.grid();
    const bool matrix_form = kind == FieldKind::sym_matrix;
    Field state = as_spectral(init);
    const double n0 = norm(state);

    if (n0 > 1e12) {
        Trajectory tr;
        tr.times.push_back(0.0);
        tr.states.push_back(state);
        tr.ledger.kinetic.push_back(matrix_form ? norm2(divergence(state)) : norm2(state));
        tr.ledger.dissipation_integral.push_back(0.0);
        tr.ledger.initial = tr.ledger.kinetic.front();
        tr.constraint_residuals.push_back(0.0);
        tr.drift_corrections.push_back(0.0);
        tr.diverged = true;
        tr.last_valid_time = 0.0;
        tr.divergence_note = "initial state norm exceeds 1e12";
        return tr;
    }

    if (n0 > 0.0) {
        if (matrix_form) {
            const StrainResidual r = check_strain_characterization(state);
            const double worst = std::max(r.trace_res, r.constraint_res);
            if (worst > 1e-8)
                throw precondition_error("evolve: init not a strain-form field", worst);
        } else {
            const double div_res = norm(divergence_scalar(state)) / n0;
            if (div_res > 1e-10)
                throw precondition_error("evolve: init not divergence-free", div_res);
            double mean = 0.0;
            for (int c = 0; c < state.ncomp(); ++c)
                mean = std::max(mean, std::abs(state.at(0, c)));
            if (mean > 1e-10 * n0)
                throw precondition_error("evolve: init not mean-zero", mean);
        }
        detail::require_cfl(state, dt, "evolve");
    }

    const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));

    Trajectory tr;
    // heuristic lifespan scale from the initial second-derivative energy
    // (dissipation_rate at nu = 1 equals ||lap M0||^2 in both forms)
    {
        const double z = detail::dissipation_rate(state, 1.0);
        if (z > 0.0) tr.lifespan_hint = 1.0 / (z * z);
        tr.notes.push_back("lifespan hint 1/||lap M0||^4 = " + std::to_string(tr.lifespan_hint) +
                           " (log only)");
    }
    if (dt > diffusive_advisory_limit(g, nu))
        tr.notes.push_back("advisory: dt exceeds the diffusive scale 0.5 (3/2 dx)^2/nu = " +
                           std::to_string(diffusive_advisory_limit(g, nu)) +
                           "; the exact heat factor keeps the linear part stable");

    const detail::HeatFactors hf = detail::make_heat_factors(g, nu, dt);

    const auto kinetic_of = [&](const Field& s) {
        return matrix_form ? norm2(divergence(s)) : norm2(s);
    };
    const auto residual_of = [&](const Field& s) {
        if (norm(s) == 0.0) return 0.0;
        if (matrix_form) {
            const StrainResidual r = check_strain_characterization(s);
            return std::max(r.trace_res, r.constraint_res);
        }
        return norm(divergence_scalar(s)) / norm(s);
    };

    tr.times.push_back(0.0);
    tr.states.push_back(state);
    tr.ledger.kinetic.push_back(kinetic_of(state));
    tr.ledger.dissipation_integral.push_back(0.0);
    tr.ledger.initial = tr.ledger.kinetic.front();
    tr.constraint_residuals.push_back(residual_of(state));
    tr.drift_corrections.push_back(0.0);
    tr.last_valid_time = 0.0;

    double dissipation = 0.0;
    bool cfl_noted = false;
    for (long s = 1; s <= nsteps; ++s) {
        const double t_prev = (s - 1) * dt;
        if (s > 1 && !cfl_noted) {
            const double cap = 0.5 * g.dx() / std::max(detail::max_speed(state), 1e-300);
            if (dt > cap) {
                tr.notes.push_back("advisory: advective CFL margin crossed at t = " +
                                   std::to_string(t_prev));
                cfl_noted = true;
            }
        }
        double dd = 0.0;
        state = matrix_form
                    ? detail::lawson_rk4_step(state, dt, hf, detail::nonlin_potential, nu, &dd)
                    : detail::lawson_rk4_step(state, dt, hf, detail::nonlin_velocity, nu, &dd);
        dissipation += dd;
        const double t = s * dt;

        if (norm2(state) > 1e24) {
            tr.diverged = true;
            tr.last_valid_time = t_prev;
            tr.divergence_note = "norm exceeded 1e12 at t = " + std::to_string(t) +
                                 "; last valid time " + std::to_string(t_prev);
            break;
        }
        tr.last_valid_time = t;

        if (s % sample_every == 0 || s == nsteps) {
            // drift repair: re-project onto the constraint manifold, record size
            Field repaired = matrix_form ? project_st(state) : project_divfree(state);
            if (!matrix_form) zero_mean(repaired);
            Field diff = repaired;
            diff -= state;
            const double base = norm(state);
            tr.drift_corrections.push_back(base > 0.0 ? norm(diff) / base : 0.0);
            state = std::move(repaired);

            tr.times.push_back(t);
            tr.states.push_back(state);
            tr.ledger.kinetic.push_back(kinetic_of(state));
            tr.ledger.dissipation_integral.push_back(dissipation);
            tr.constraint_residuals.push_back(residual_of(state));
        }
    }
    return tr;
}

// runs both forms from the same velocity data and returns the worst relative
// conjugacy mismatch max_t ||u(t) + div M(t)|| / ||u0|| over the samples
inline double equivalence_residual(const Field& u0_in, double T, double dt, double nu = 1.0,
                                   int sample_every = 0) {
    require_kind(u0_in, FieldKind::vector, "equivalence_residual");
    const Field u0 = as_spectral(u0_in);
    const double base = norm(u0);
    if (base == 0.0) return 0.0;
    if (sample_every < 1) {
        const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));
        sample_every = static_cast<int>(std::max<long>(1, nsteps / 8));
    }
    const Trajectory tu = evolve(u0, T, dt, sample_every, nu);
    const Trajectory tm = evolve(potential_from_velocity(u0), T, dt, sample_every, nu);
    if (tu.diverged || tm.diverged)
        throw config_error("equivalence_residual: trajectory diverged");
    double worst = 0.0;
    for (std::size_t i = 0; i < tu.states.size(); ++i) {
        Field r = divergence(tm.states[i]);
        r += tu.states[i];
        worst = std::max(worst, norm(r) / base);
    }
    return worst;
}

// integrates d/dt f = lap f + |grad f|^2 with the same scheme and compares
// against the closed form f(t) = log(e^{t lap} e^{f0}); returns the largest
// pointwise error at the final time
inline double cole_hopf_check(const Field& f0_in, double T, double dt) {
    require_kind(f0_in, FieldKind::scalar, "cole_hopf_check");
    detail::require_step_args(dt, 1.0, "cole_hopf_check");
    if (!(T > 0.0)) throw config_error("cole_hopf_check: T must be positive");
    const Grid& g = f0_in.grid();

    Field f = as_spectral(f0_in);
    if (norm(f) > 0.0) detail::require_cfl(f, dt, "cole_hopf_check");
    const long nsteps = static_cast<long>(std::ceil(T / dt - 1e-9));
    const detail::HeatFactors hf = detail::make_heat_factors(g, 1.0, dt);
    for (long s = 0; s < nsteps; ++s)
        f = detail::lawson_rk4_step(f, dt, hf, detail::nonlin_hamilton_jacobi, 1.0, nullptr);
    const Field f_num = inverse_transform(f);

    // closed form: exponentiate, heat-evolve exactly, take the log
    const Field f0p = as_physical(f0_in);
    Field G(g, FieldKind::scalar, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p)
        G.at(p, 0) = complexd(std::exp(f0p.at(p, 0).real()), 0.0);
    G = forward_transform(G);
    const detail::HeatFactors hT = detail::make_heat_factors(g, 1.0, nsteps * dt);
    detail::apply_factor(G, hT.full);
    G = inverse_transform(G);

    double err = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double gv = G.at(p, 0).real();
        if (!(gv > 0.0))
            throw config_error("cole_hopf_check: heat-evolved e^{f0} lost positivity");
        err = std::max(err, std::abs(f_num.at(p, 0).real() - std::log(gv)));
    }
    return err;
}

// ---------------------------------------------------------------------------
// canonical initial data

// classical cellular flow (sin cos cos, -cos sin cos, 0); divergence-free,
// mean-zero, mean-square norm 1/4
inline Field taylor_green(const Grid& g) {
    if (g.d != 3) throw config_error("taylor_green: needs d = 3");
    Field u(g, FieldKind::vector, Rep::physical);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const double x = two_pi * ix[0] / g.n;
        const double y = two_pi * ix[1] / g.n;
        const double z = two_pi * ix[2] / g.n;
        u.at(p, 0) = complexd(std::sin(x) * std::cos(y) * std::cos(z), 0.0);
        u.at(p, 1) = complexd(-std::cos(x) * std::sin(y) * std::cos(z), 0.0);
        u.at(p, 2) = complexd(0.0, 0.0);
    }
    return u;
}

}  // namespace matfield
