// The structural identities: strain characterization residuals, the
// velocity-to-strain isometry (factor 1/2 on squared norms), the curl formula
// for the strain-part norm, divergence/projection commutation, exact cubic
// rotation equivariance, and the pointwise determinant bound with its
// equality characterization.

#include <catch2/catch_amalgamated.hpp>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/fft.hpp"
#include "matfield/identities.hpp"
#include "matfield/rng.hpp"

using namespace matfield;

namespace {

Field random_divfree(const Grid& g, std::uint64_t seed) {
    Field u = random_field(g, FieldKind::vector, 2.0, seed);
    zero_mean(u);
    return project_divfree(u);
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("strain fields satisfy the characterization; Hessian fields do not") {
    Grid g = make_grid(3, 16, 1.0);
    SECTION("every strain projection passes both residuals") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Field M = random_field(g, FieldKind::sym_matrix, 2.0, 800 + seed);
            StrainResidual r = check_strain_characterization(project_st(M));
            REQUIRE(r.trace_res < 1e-10);
            REQUIRE(r.constraint_res < 1e-10);
        }
    }
    SECTION("Hessian fields come back negated: residual 1") {
        Field f = random_field(g, FieldKind::scalar, 2.0, 810);
        zero_mean(f);
        // Hess (-lap)^{-1} f = grad grad of the potential
        Field M = sym_gradient(gradient(inverse_laplacian(f)));
        StrainResidual r = check_strain_characterization(M);
        REQUIRE(r.constraint_res >= 0.5);
    }
    SECTION("zero field reports zero residuals") {
        Field z(g, FieldKind::sym_matrix, Rep::spectral);
        StrainResidual r = check_strain_characterization(z);
        REQUIRE((r.trace_res == 0.0 && r.constraint_res == 0.0));
    }
}

TEST_CASE("velocity-to-strain map is an isometry up to the factor one half") {
    Grid g = make_grid(3, 16, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Field u = random_divfree(g, 820 + seed);
        Field S = strain_from_velocity(u);
        const double nu2 = norm2(u);
        REQUIRE(norm2(S) == Catch::Approx(0.5 * nu2).epsilon(1e-10));
        // curl route: || curl (-lap)^{-1/2} u ||^2 = ||u||^2 for div-free u
        const double curl2 = norm2(curl(neg_laplacian_pow(u, -0.5)));
        REQUIRE(0.5 * curl2 == Catch::Approx(0.5 * nu2).epsilon(1e-10));
        StrainResidual r = check_strain_characterization(S);
        REQUIRE(r.trace_res < 1e-10);
        REQUIRE(r.constraint_res < 1e-10);
    }
}

TEST_CASE("Taylor-Green velocity gives the exact one-half ratio") {
    Grid g = make_grid(3, 16, 1.0);
    Field u(g, FieldKind::vector, Rep::physical);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const double x = two_pi * ix[0] / g.n, y = two_pi * ix[1] / g.n, z = two_pi * ix[2] / g.n;
        u.at(p, 0) = complexd(std::sin(x) * std::cos(y) * std::cos(z), 0.0);
        u.at(p, 1) = complexd(-std::cos(x) * std::sin(y) * std::cos(z), 0.0);
    }
    Field S = strain_from_velocity(u);
    REQUIRE(norm2(S) / norm2(u) == Catch::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("non-divergence-free input is rejected with the measured residual") {
    Grid g = make_grid(3, 8, 1.0);
    Field u = random_field(g, FieldKind::vector, 2.0, 830);  // generic: not div-free
    zero_mean(u);
    try {
        strain_from_velocity(u);
        FAIL("expected precondition_error");
    } catch (const precondition_error& e) {
        REQUIRE(e.measured > 1e-10);
    }
    // non-mean-zero input is also rejected
    Field v = random_divfree(g, 831);
    v.at(0, 1) = complexd(0.5, 0.0);
    REQUIRE_THROWS_AS(strain_from_velocity(v), precondition_error);
}

TEST_CASE("strain-part norm through the curl") {
    Grid g = make_grid(3, 16, 1.0);
    SECTION("random fields match the projection norm") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Field M = random_field(g, FieldKind::sym_matrix, 2.0, 840 + seed);
            const double via_curl = projection_norm_via_curl(M);
            const double direct = norm2(project_st(M));
            REQUIRE(via_curl == Catch::Approx(direct).epsilon(1e-10));
        }
    }
    SECTION("Hessian and div-free fields give zero") {
        Field f = random_field(g, FieldKind::scalar, 2.0, 850);
        zero_mean(f);
        Field H = sym_gradient(gradient(inverse_laplacian(f)));
        REQUIRE(projection_norm_via_curl(H) < 1e-12 * norm2(H));
        Field M = random_field(g, FieldKind::sym_matrix, 2.0, 851);
        Field D = project_id_tilde(M) + project_trdivfree(M);
        REQUIRE(projection_norm_via_curl(D) < 1e-12 * (1.0 + norm2(D)));
    }
}

TEST_CASE("divergence commutes with the strain projection") {
    for (int d : {2, 3, 4}) {
        Grid g = make_grid(d, 12, 1.0);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Field M = random_field(g, FieldKind::sym_matrix, 2.0, 860 + seed);
            INFO("d=" << d);
            REQUIRE(div_commutation_residual(M) < 1e-10);
        }
        // div-free fields: both sides vanish outright
        Field M = random_field(g, FieldKind::sym_matrix, 2.0, 870);
        Field D = project_id_tilde(M) + project_trdivfree(M);
        REQUIRE(max_abs(divergence(project_st(D))) < 1e-10);
    }
}

TEST_CASE("the cubic rotation group has 24 orthogonal elements") {
    auto rots = cubic_rotations();
    REQUIRE(rots.size() == 24);
    for (const CubicRotation& q : rots) {
        // orthogonality: Q'Q = I over integers
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                int dot = 0;
                for (int r = 0; r < 3; ++r) dot += q.m[r][a] * q.m[r][b];
                REQUIRE(dot == (a == b ? 1 : 0));
            }
    }
    // uniqueness
    for (std::size_t i = 0; i < rots.size(); ++i)
        for (std::size_t j = i + 1; j < rots.size(); ++j) {
            bool same = true;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    if (rots[i].m[r][c] != rots[j].m[r][c]) same = false;
            REQUIRE(!same);
        }
}

TEST_CASE("rotations preserve norms exactly and commute with the projection") {
    Grid g = make_grid(3, 8, 1.0);
    Field S = project_st(random_field(g, FieldKind::sym_matrix, 2.0, 880));
    const double nS = norm(S);
    for (const CubicRotation& q : cubic_rotations()) {
        Field Sq = rotate_field(S, q);
        REQUIRE(std::abs(norm(Sq) - nS) < 1e-14 * nS);
        StrainResidual r = check_strain_characterization(Sq);
        REQUIRE(r.trace_res < 1e-10);
        REQUIRE(r.constraint_res < 1e-10);
    }
    // commutation on a generic field, physical and spectral routes
    Field M = random_field(g, FieldKind::sym_matrix, 2.0, 881);
    const CubicRotation rot90{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};  // 90 degrees about e3
    Field lhs = project_st(rotate_field(M, rot90));
    Field rhs = rotate_field(project_st(M), rot90);
    REQUIRE(max_diff(lhs, rhs) < 1e-10);
    Field Mp = as_physical(M);
    Field lhs_p = project_st(rotate_field(Mp, rot90));
    Field rhs_p = rotate_field(project_st(Mp), rot90);
    REQUIRE(max_diff(lhs_p, rhs_p) < 1e-10);
}

TEST_CASE("identity rotation is a no-op and non-rotations are rejected") {
    Grid g = make_grid(3, 8, 1.0);
    Field S = as_physical(random_field(g, FieldKind::sym_matrix, 2.0, 890));
    const CubicRotation eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    REQUIRE(max_diff(rotate_field(S, eye), S) == 0.0);
    const CubicRotation reflection{{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // det -1
    REQUIRE_THROWS_AS(rotate_field(S, reflection), config_error);
    const CubicRotation junk{{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
    REQUIRE_THROWS_AS(rotate_field(S, junk), config_error);
}

TEST_CASE("rotation and eigen-decomposition commute up to sample permutation") {
    Grid g = make_grid(3, 8, 1.0);
    Field S = as_physical(random_field(g, FieldKind::sym_matrix, 2.0, 895));
    const CubicRotation rot90{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
    Field Sq = rotate_field(S, rot90);
    EigenField a = eigen_decompose_field(S);
    EigenField b = eigen_decompose_field(Sq);
    // sorted eigenvalue fields agree as multisets; compare via sorted copies
    auto sorted_values = [](const Field& f) {
        std::vector<double> v(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i].real();
        std::sort(v.begin(), v.end());
        return v;
    };
    for (int which = 0; which < 3; ++which) {
        const Field& fa = which == 0 ? a.lam1 : which == 1 ? a.lam2 : a.lam3;
        const Field& fb = which == 0 ? b.lam1 : which == 1 ? b.lam2 : b.lam3;
        auto va = sorted_values(fa);
        auto vb = sorted_values(fb);
        double worst = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
        REQUIRE(worst < 1e-10);
    }
}

TEST_CASE("determinant bound: no violations, equality exactly at degenerate spectra") {
    Grid g = make_grid(3, 8, 1.0);
    SECTION("random trace-free fields never violate the bound") {
        Field M = as_physical(random_field(g, FieldKind::sym_matrix, 2.0, 900));
        for (std::size_t p = 0; p < g.points(); ++p) {
            const complexd tr = (M.at(p, 0) + M.at(p, 3) + M.at(p, 5)) / 3.0;
            M.at(p, 0) -= tr;
            M.at(p, 3) -= tr;
            M.at(p, 5) -= tr;
        }
        DetBoundReport rep = det_bound_check(M);
        REQUIRE(rep.max_violation <= 1e-10 * rep.max_norm_cubed);
        // independent pointwise oracle through the eigenvalues
        EigenField ef = eigen_decompose_field(M);
        double worst = 0.0;
        for (std::size_t p = 0; p < g.points(); ++p) {
            const double l1 = ef.lam1[p].real(), l2 = ef.lam2[p].real(), l3 = ef.lam3[p].real();
            const double lhs = -4.0 * l1 * l2 * l3;
            const double n2 = l1 * l1 + l2 * l2 + l3 * l3;
            worst = std::max(worst, lhs - (2.0 / 9.0) * std::sqrt(6.0) * n2 * std::sqrt(n2));
        }
        REQUIRE(worst <= 1e-10 * rep.max_norm_cubed);
    }
    SECTION("the normalized (-2,1,1) matrix achieves equality") {
        Field M(g, FieldKind::sym_matrix, Rep::physical);
        const double a = 1.0 / std::sqrt(6.0);
        for (std::size_t p = 0; p < g.points(); ++p) {
            M.at(p, 0) = complexd(-2.0 * a, 0.0);
            M.at(p, 3) = complexd(a, 0.0);
            M.at(p, 5) = complexd(a, 0.0);
        }
        DetBoundReport rep = det_bound_check(M);
        REQUIRE(rep.max_violation <= 1e-12);
        REQUIRE(rep.max_violation >= -1e-12);
        REQUIRE(rep.equality_sites == static_cast<long>(g.points()));
        REQUIRE(rep.degenerate_equality_sites == rep.equality_sites);
    }
    SECTION("rank-deficient spread spectrum stays strictly below") {
        Field M(g, FieldKind::sym_matrix, Rep::physical);
        for (std::size_t p = 0; p < g.points(); ++p) {
            M.at(p, 0) = complexd(-1.0, 0.0);
            M.at(p, 5) = complexd(1.0, 0.0);  // diag(-1, 0, 1): det 0
        }
        DetBoundReport rep = det_bound_check(M);
        REQUIRE(rep.max_violation < 0.0);
        REQUIRE(rep.equality_sites == 0);
    }
    SECTION("non-trace-free input is rejected") {
        Field M(g, FieldKind::sym_matrix, Rep::physical);
        for (std::size_t p = 0; p < g.points(); ++p) M.at(p, 0) = complexd(1.0, 0.0);
        REQUIRE_THROWS_AS(det_bound_check(M), precondition_error);
    }
}
