// Time integration: velocity/potential conversion, exact heat decay of
// linear flows, fourth-order convergence, energy bookkeeping, discrete
// velocity/potential conjugacy, divergence reporting, and the Hamilton-Jacobi
// closed-form validation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/evolve.hpp"
#include "matfield/fft.hpp"
#include "matfield/identities.hpp"
#include "matfield/rng.hpp"

using namespace matfield;

namespace {

Field random_divfree(const Grid& g, std::uint64_t seed) {
    Field u = random_field(g, FieldKind::vector, 2.0, seed);
    zero_mean(u);
    u = project_divfree(u);
    u *= 1.0 / norm(u);
    return u;
}

// u = (sin 2 pi x2, 0, 0): single-mode shear, zero nonlinearity
Field shear_flow(const Grid& g) {
    Field u(g, FieldKind::vector, Rep::physical);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        u.at(p, 0) = complexd(std::sin(two_pi * ix[1] / g.n), 0.0);
        u.at(p, 1) = complexd(0.0, 0.0);
        u.at(p, 2) = complexd(0.0, 0.0);
    }
    return u;
}

Field cosine_scalar(const Grid& g, double amp) {
    Field f(g, FieldKind::scalar, Rep::physical);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        f.at(p, 0) = complexd(amp * std::cos(two_pi * ix[0] / g.n), 0.0);
    }
    return f;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// 2 ||grad u||^2 via the spectral sum, independent of the library's
// dissipation bookkeeping
double two_grad_norm2(const Field& u_in) {
    const Field u = as_spectral(u_in);
    const Grid& g = u.grid();
    int ix[4];
    double acc = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        double xi2 = 0.0;
        for (int a = 0; a < g.d; ++a) xi2 += g.xi(ix[a]) * g.xi(ix[a]);
        for (int c = 0; c < u.ncomp(); ++c)
            acc += 4.0 * pi * pi * xi2 * std::norm(u.at(p, c));
    }
    return 2.0 * acc;
}

}  // namespace

TEST_CASE("taylor_green: divergence-free, mean-zero, mean-square 1/4") {
    Grid g = make_grid(3, 16, 1.0);
    Field u = taylor_green(g);
    REQUIRE(norm2(u) == Catch::Approx(0.25).margin(1e-14));
    Field us = as_spectral(u);
    REQUIRE(norm(divergence_scalar(us)) < 1e-13);
    for (int c = 0; c < 3; ++c) REQUIRE(std::abs(us.at(0, c)) < 1e-15);
}

TEST_CASE("potential_from_velocity: conversion and round trip") {
    Grid g = make_grid(3, 16, 1.0);

    SECTION("-div M = u and the output is a strain-form field") {
        for (std::uint64_t seed : {0ull, 1ull}) {
            Field u = seed == 0 ? as_spectral(taylor_green(g)) : random_divfree(g, 50 + seed);
            Field M = potential_from_velocity(u);
            Field back = velocity_from_potential(M);
            back -= u;
            REQUIRE(norm(back) < 1e-12 * norm(u));
            StrainResidual r = check_strain_characterization(M);
            REQUIRE(r.trace_res < 1e-12);
            REQUIRE(r.constraint_res < 1e-12);
        }
    }
    SECTION("round trip is the identity to 1e-12") {
        Field u = random_divfree(g, 77);
        Field again = velocity_from_potential(potential_from_velocity(u));
        again -= u;
        REQUIRE(norm(again) < 1e-12);
    }
    SECTION("zero maps to zero") {
        Field z(g, FieldKind::vector, Rep::spectral);
        REQUIRE(norm(potential_from_velocity(z)) == 0.0);
    }
    SECTION("physical input gives physical output") {
        Field u = as_physical(random_divfree(g, 78));
        REQUIRE(potential_from_velocity(u).rep() == Rep::physical);
    }
    SECTION("rejects non-divergence-free and non-mean-zero input") {
        Field w = random_field(g, FieldKind::vector, 2.0, 90);
        zero_mean(w);
        REQUIRE_THROWS_AS(potential_from_velocity(w), precondition_error);
        Field u = random_divfree(g, 91);
        u.at(0, 1) = complexd(0.5, 0.0);
        REQUIRE_THROWS_AS(potential_from_velocity(u), precondition_error);
    }
}

TEST_CASE("step_velocity: shear flow decays as the exact heat factor") {
    Grid g = make_grid(3, 16, 1.0);
    const double nu = 0.3, dt = 1e-3;
    Field u = as_spectral(shear_flow(g));

    SECTION("one step") {
        Field u1 = step_velocity(u, dt, nu);
        Field exact = u;
        exact *= std::exp(-4.0 * pi * pi * nu * dt);
        REQUIRE(max_diff(u1, exact) < 1e-15);
    }
    SECTION("many steps compose the factor") {
        Field s = u;
        for (int k = 0; k < 20; ++k) s = step_velocity(s, dt, nu);
        Field exact = u;
        exact *= std::exp(-4.0 * pi * pi * nu * 20 * dt);
        REQUIRE(max_diff(s, exact) < 1e-13);
    }
    SECTION("rejects bad arguments") {
        REQUIRE_THROWS_AS(step_velocity(u, -1e-3, nu), config_error);
        REQUIRE_THROWS_AS(step_velocity(u, dt, 0.0), config_error);
        REQUIRE_THROWS_AS(step_velocity(u, 1.0, nu), config_error);  // CFL
        Field w = random_field(g, FieldKind::vector, 2.0, 5);
        zero_mean(w);
        REQUIRE_THROWS_AS(step_velocity(w, dt, nu), precondition_error);
    }
}

TEST_CASE("step_potential: heat decay, one-step conjugacy, symmetry") {
    Grid g = make_grid(3, 16, 1.0);
    const double nu = 0.3, dt = 1e-3;
    Field u = as_spectral(shear_flow(g));
    Field M = potential_from_velocity(u);

    SECTION("shear potential follows pure heat decay") {
        Field M1 = step_potential(M, dt, nu);
        Field exact = M;
        exact *= std::exp(-4.0 * pi * pi * nu * dt);
        REQUIRE(max_diff(M1, exact) < 1e-15);
    }
    SECTION("one potential step equals the mapped velocity step") {
        Field ug = as_spectral(taylor_green(g));
        Field left = step_potential(potential_from_velocity(ug), dt, nu);
        Field right = potential_from_velocity(step_velocity(ug, dt, nu));
        REQUIRE(max_diff(left, right) < 1e-13);
    }
    SECTION("output stays in the strain subspace and stays real") {
        Field ug = random_divfree(g, 12);
        Field M0 = potential_from_velocity(ug);
        Field M1 = step_potential(M0, dt, nu);
        StrainResidual r = check_strain_characterization(M1);
        REQUIRE(std::max(r.trace_res, r.constraint_res) < 1e-8);
        double imag = 0.0;
        Field M1p = as_physical(M1);
        for (std::size_t i = 0; i < M1p.size(); ++i)
            imag = std::max(imag, std::abs(M1p[i].imag()));
        REQUIRE(imag < 1e-13);
    }
    SECTION("rejects non-strain input") {
        Field H = random_field(g, FieldKind::sym_matrix, 2.0, 3);
        REQUIRE_THROWS_AS(step_potential(H, dt, nu), precondition_error);
    }
}

TEST_CASE("velocity stepping converges at fourth order") {
    Grid g = make_grid(3, 16, 1.0);
    Field u0 = as_spectral(taylor_green(g));
    const double nu = 0.01, T = 0.02;
    auto final_state = [&](double dt) {
        Trajectory t = evolve(u0, T, dt, 1 << 20, nu);
        REQUIRE_FALSE(t.diverged);
        return t.states.back();
    };
    Field ref = final_state(1.25e-4);
    double err[3];
    const double dts[3] = {2e-3, 1e-3, 5e-4};
    for (int i = 0; i < 3; ++i) {
        Field d = final_state(dts[i]);
        d -= ref;
        err[i] = norm(d);
    }
    REQUIRE(err[0] / err[1] > 10.0);
    REQUIRE(err[0] / err[1] < 24.0);
    REQUIRE(err[1] / err[2] > 10.0);
    REQUIRE(err[1] / err[2] < 24.0);
}

TEST_CASE("evolve: trajectory bookkeeping on the cellular flow") {
    Grid g = make_grid(3, 16, 1.0);
    Field u0 = taylor_green(g);
    const double nu = 1.0, dt = 1e-3, T = 0.05;
    Trajectory tr = evolve(potential_from_velocity(as_spectral(u0)), T, dt, 10, nu);

    REQUIRE_FALSE(tr.diverged);
    REQUIRE(tr.times.front() == 0.0);
    REQUIRE(tr.times.back() == Catch::Approx(T).margin(1e-12));
    for (std::size_t i = 1; i < tr.times.size(); ++i) REQUIRE(tr.times[i] > tr.times[i - 1]);
    REQUIRE(tr.states.size() == tr.times.size());
    REQUIRE(tr.ledger.kinetic.size() == tr.times.size());

    SECTION("energy balance and monotone decay") {
        REQUIRE(tr.ledger.initial == Catch::Approx(0.25).margin(1e-12));
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            REQUIRE(energy_defect(tr.ledger, i) < 1e-6);
        for (std::size_t i = 1; i < tr.times.size(); ++i)
            REQUIRE(tr.ledger.kinetic[i] < tr.ledger.kinetic[i - 1]);
    }
    SECTION("sampled states stay on the constraint manifold") {
        for (double r : tr.constraint_residuals) REQUIRE(r < 1e-8);
        for (double c : tr.drift_corrections) REQUIRE(c < 1e-8);
    }
    SECTION("lifespan hint matches the initial second-derivative energy") {
        const double z = two_grad_norm2(as_spectral(u0));
        REQUIRE(tr.lifespan_hint == Catch::Approx(1.0 / (z * z)).epsilon(1e-10));
        REQUIRE_FALSE(tr.notes.empty());
    }
}

TEST_CASE("evolve: velocity form from a random start preserves its constraints") {
    Grid g = make_grid(3, 16, 1.0);
    Field u0 = random_divfree(g, 314);
    Trajectory tr = evolve(u0, 0.02, 1e-3, 5, 0.05);
    REQUIRE_FALSE(tr.diverged);
    for (double r : tr.constraint_residuals) REQUIRE(r < 1e-10);
    for (double c : tr.drift_corrections) REQUIRE(c < 1e-10);
    for (std::size_t i = 1; i < tr.times.size(); ++i)
        REQUIRE(tr.ledger.kinetic[i] < tr.ledger.kinetic[i - 1]);
}

TEST_CASE("evolve: zero initial data stays zero") {
    Grid g = make_grid(3, 16, 1.0);
    Field z(g, FieldKind::sym_matrix, Rep::spectral);
    Trajectory tr = evolve(z, 0.01, 1e-3, 2, 1.0);
    REQUIRE_FALSE(tr.diverged);
    for (const Field& s : tr.states) REQUIRE(norm(s) == 0.0);
    for (double k : tr.ledger.kinetic) REQUIRE(k == 0.0);
    REQUIRE(std::isinf(tr.lifespan_hint));
}

TEST_CASE("evolve: diverged state produces a report, not an exception") {
    Grid g = make_grid(3, 16, 1.0);
    Field M = potential_from_velocity(as_spectral(taylor_green(g)));
    M *= 4e13;
    Trajectory tr = evolve(M, 0.01, 1e-3, 1, 1.0);
    REQUIRE(tr.diverged);
    REQUIRE(tr.last_valid_time == 0.0);
    REQUIRE_FALSE(tr.divergence_note.empty());
    REQUIRE(tr.states.size() == 1);
}

TEST_CASE("evolve: rejects bad configuration") {
    Grid g = make_grid(3, 16, 1.0);
    Field u = as_spectral(taylor_green(g));
    REQUIRE_THROWS_AS(evolve(u, -0.1, 1e-3, 1), config_error);
    REQUIRE_THROWS_AS(evolve(u, 0.1, 1e-3, 0), config_error);
    REQUIRE_THROWS_AS(evolve(u, 0.1, 1.0, 1), config_error);  // CFL at start
    Field f(g, FieldKind::scalar, Rep::spectral);
    REQUIRE_THROWS_AS(evolve(f, 0.1, 1e-3, 1), config_error);
}

TEST_CASE("the two forms are discretely conjugate") {
    Grid g = make_grid(3, 16, 1.0);

    SECTION("single-mode linear flow agrees to rounding") {
        REQUIRE(equivalence_residual(shear_flow(g), 0.02, 1e-3, 0.3) < 1e-12);
    }
    SECTION("nonlinear cellular flow agrees to rounding at two step sizes") {
        // the spectral map intertwines the discrete flows exactly, so the
        // residual sits at rounding level for every dt instead of at O(dt^4)
        REQUIRE(equivalence_residual(taylor_green(g), 0.02, 1e-3, 0.05) < 1e-10);
        REQUIRE(equivalence_residual(taylor_green(g), 0.02, 5e-4, 0.05) < 1e-10);
    }
}

TEST_CASE("hamilton-jacobi flow matches the closed form") {
    Grid g = make_grid(3, 16, 1.0);
    Field f0 = cosine_scalar(g, 0.1);

    SECTION("zero data gives zero error") {
        Field z(g, FieldKind::scalar, Rep::physical);
        REQUIRE(cole_hopf_check(z, 0.05, 1e-3) < 1e-15);
    }
    SECTION("benchmark amplitude and horizon") {
        REQUIRE(cole_hopf_check(f0, 0.05, 1e-4) < 1e-6);
    }
    SECTION("fourth-order error decay") {
        double e1 = cole_hopf_check(f0, 0.05, 2e-3);
        double e2 = cole_hopf_check(f0, 0.05, 1e-3);
        double e3 = cole_hopf_check(f0, 0.05, 5e-4);
        REQUIRE(e1 / e2 > 8.0);
        REQUIRE(e1 / e2 < 32.0);
        REQUIRE(e2 / e3 > 8.0);
        REQUIRE(e2 / e3 < 32.0);
    }
    SECTION("rejects a step size beyond the transport cap") {
        REQUIRE_THROWS_AS(cole_hopf_check(cosine_scalar(g, 40.0), 0.05, 1e-2), config_error);
    }
}

TEST_CASE("dissipation bookkeeping agrees across forms") {
    Grid g = make_grid(3, 16, 1.0);
    Field u0 = as_spectral(taylor_green(g));
    const double nu = 0.05, dt = 1e-3, T = 0.02;
    Trajectory tu = evolve(u0, T, dt, 5, nu);
    Trajectory tm = evolve(potential_from_velocity(u0), T, dt, 5, nu);
    REQUIRE(tu.times.size() == tm.times.size());
    for (std::size_t i = 0; i < tu.times.size(); ++i) {
        REQUIRE(tu.ledger.kinetic[i] == Catch::Approx(tm.ledger.kinetic[i]).margin(1e-12));
        REQUIRE(tu.ledger.dissipation_integral[i] ==
                Catch::Approx(tm.ledger.dissipation_integral[i]).margin(1e-12));
    }
    // ||lap M||^2 = 2||grad u||^2 on matched states
    for (std::size_t i = 0; i < tu.times.size(); ++i) {
        const double lhs = matfield::detail::dissipation_rate(tm.states[i], 1.0);
        REQUIRE(lhs == Catch::Approx(two_grad_norm2(tu.states[i])).epsilon(1e-10));
    }
}
