// Spectral calculus: single trigonometric modes differentiate exactly, the
// inverse Laplacian inverts the Laplacian on mean-zero data, vector and
// matrix divergences satisfy the usual composition identities, the Nyquist
// plane is annihilated by odd-order derivatives, and dealiasing removes
// exactly the upper-third modes.

#include <catch2/catch_amalgamated.hpp>

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/fft.hpp"
#include "matfield/rng.hpp"

using namespace matfield;

namespace {

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Field cosine(const Grid& g, int axis, int k, double amp) {
    Field f(g, FieldKind::scalar, Rep::physical);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        f[p] = complexd(amp * std::cos(two_pi * k * ix[axis] / g.n), 0.0);
    }
    return f;
}

}  // namespace

TEST_CASE("derivative of a cosine is exact, including the box scaling") {
    Grid g = make_grid(3, 16, 2.5);
    Field f = cosine(g, 1, 2, 1.0);
    Field df = as_physical(derivative(as_spectral(f), 1));
    int ix[4];
    double worst = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        const double x = ix[1] * g.dx();
        const double expect = -(two_pi * 2 / g.L) * std::sin(two_pi * 2 / g.L * x);
        worst = std::max(worst, std::abs(df[p] - complexd(expect, 0.0)));
    }
    REQUIRE(worst < 1e-12);
}

TEST_CASE("odd-order multipliers annihilate the Nyquist plane") {
    Grid g = make_grid(2, 8, 1.0);
    Field f(g, FieldKind::scalar, Rep::spectral);
    // place data only on the k0 = n/2 plane
    f.at(static_cast<std::size_t>(g.n / 2) * g.n + 1, 0) = complexd(1.0, 0.0);
    REQUIRE(max_abs(derivative(f, 0)) == 0.0);
    REQUIRE(max_abs(derivative(f, 1)) > 0.0);  // the other axis still acts
}

TEST_CASE("inverse Laplacian inverts the Laplacian on mean-zero fields") {
    Grid g = make_grid(3, 12, 1.7);
    Field f = random_field(g, FieldKind::scalar, 2.0, 21);
    zero_mean(f);
    Field lap = neg_laplacian_pow(f, 1.0);
    Field back = inverse_laplacian(lap);
    REQUIRE(max_diff(back, f) < 1e-12);
    // fractional powers compose
    Field half = neg_laplacian_pow(neg_laplacian_pow(f, 0.5), 0.5);
    REQUIRE(max_diff(half, lap) < 1e-10);
    REQUIRE_THROWS_AS(inverse_laplacian(f, 0.0), config_error);
}

TEST_CASE("div grad equals the negative of the positive Laplacian") {
    Grid g = make_grid(2, 16, 1.0);
    Field f = random_field(g, FieldKind::scalar, 2.0, 5);
    Field lhs = divergence_scalar(gradient(f));
    Field rhs = -1.0 * neg_laplacian_pow(f, 1.0);
    REQUIRE(max_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("symmetric plus antisymmetric gradient reassembles the gradient") {
    Grid g = make_grid(3, 12, 1.0);
    Field u = random_field(g, FieldKind::vector, 2.0, 31);
    Field S = sym_gradient(u);
    Field A = antisym_gradient(u);
    // check component-wise: d_i u_j = S_ij + A_ij
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Field diuj = derivative(u, i);  // all components; select j below
            double worst = 0.0;
            for (std::size_t p = 0; p < g.points(); ++p) {
                complexd s = (i <= j) ? S.at(p, sym_index(i, j, 3)) : S.at(p, sym_index(j, i, 3));
                complexd a(0.0, 0.0);
                if (i < j) a = A.at(p, antisym_index(i, j, 3));
                else if (i > j) a = -A.at(p, antisym_index(j, i, 3));
                worst = std::max(worst, std::abs(diuj.at(p, j) - (s + a)));
            }
            REQUIRE(worst < 1e-12);
        }
}

TEST_CASE("matrix divergence matches the component definition") {
    Grid g = make_grid(3, 12, 1.3);
    Field M = random_field(g, FieldKind::sym_matrix, 2.0, 41);
    Field div = divergence(M);
    for (int i = 0; i < 3; ++i) {
        Field acc(g, FieldKind::scalar, Rep::spectral);
        for (int j = 0; j < 3; ++j) {
            Field comp(g, FieldKind::scalar, Rep::spectral);
            const int c = (i <= j) ? sym_index(i, j, 3) : sym_index(j, i, 3);
            for (std::size_t p = 0; p < g.points(); ++p) comp[p] = M.at(p, c);
            acc += derivative(comp, j);
        }
        double worst = 0.0;
        for (std::size_t p = 0; p < g.points(); ++p) worst = std::max(worst, std::abs(div.at(p, i) - acc[p]));
        REQUIRE(worst < 1e-12);
    }
}

TEST_CASE("curl of a gradient vanishes and the curl has zero divergence") {
    Grid g = make_grid(3, 12, 1.0);
    Field f = random_field(g, FieldKind::scalar, 2.0, 51);
    REQUIRE(max_abs(curl(gradient(f))) < 1e-12);
    Field u = random_field(g, FieldKind::vector, 2.0, 52);
    REQUIRE(max_abs(divergence_scalar(curl(u))) < 1e-12);
    Grid g2 = make_grid(2, 12, 1.0);
    Field v(g2, FieldKind::vector, Rep::spectral);
    REQUIRE_THROWS_AS(curl(v), config_error);
}

TEST_CASE("axial vector round trip in three dimensions") {
    Grid g = make_grid(3, 8, 1.0);
    Field A = random_field(g, FieldKind::antisym_matrix, 2.0, 61);
    Field back = axial_to_antisym(antisym_to_axial(A));
    REQUIRE(max_diff(back, A) < 1e-14);
    // the axial map is an isometry up to the factor sqrt(2)
    REQUIRE(norm2(A) == Catch::Approx(2.0 * norm2(antisym_to_axial(A))).epsilon(1e-12));
}

TEST_CASE("dealiasing zeroes exactly the modes above two thirds of the band") {
    Grid g = make_grid(2, 12, 1.0);  // keep |k| <= 4, drop |k| = 5, 6
    Field f(g, FieldKind::scalar, Rep::spectral);
    f.fill(complexd(1.0, 0.0));
    dealias(f);
    int ix[4];
    for (std::size_t p = 0; p < g.points(); ++p) {
        decode_point(p, g, ix);
        bool keep = true;
        for (int a = 0; a < 2; ++a)
            if (std::abs(g.signed_mode(ix[a])) > g.n / 3) keep = false;
        REQUIRE(f[p] == (keep ? complexd(1.0, 0.0) : complexd(0.0, 0.0)));
    }
}

TEST_CASE("zero_mean removes exactly the mean mode") {
    Grid g = make_grid(2, 8, 1.0);
    Field f = random_field(g, FieldKind::vector, 2.0, 71);
    f.at(0, 0) = complexd(4.0, 0.0);
    f.at(0, 1) = complexd(-1.0, 0.0);
    zero_mean(f);
    REQUIRE(std::abs(f.at(0, 0)) == 0.0);
    REQUIRE(std::abs(f.at(0, 1)) == 0.0);
}

TEST_CASE("trace of a symmetric field") {
    Grid g = make_grid(3, 8, 1.0);
    Field M(g, FieldKind::sym_matrix, Rep::physical);
    for (std::size_t p = 0; p < g.points(); ++p) {
        M.at(p, sym_index(0, 0, 3)) = complexd(1.0, 0.0);
        M.at(p, sym_index(1, 1, 3)) = complexd(2.0, 0.0);
        M.at(p, sym_index(2, 2, 3)) = complexd(3.5, 0.0);
        M.at(p, sym_index(0, 1, 3)) = complexd(9.0, 0.0);  // off-diagonal does not contribute
    }
    Field tr = trace_field(M);
    REQUIRE(std::abs(tr[0] - complexd(6.5, 0.0)) < 1e-15);
}
