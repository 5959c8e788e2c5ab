// Transform correctness against a direct-summation DFT oracle, plus the
// convention anchors: forward carries the 1/n^d factor, so a constant field c
// has mode-zero coefficient c, cos(2 pi x_1 / L) has coefficients 1/2 at the
// signed modes +-e_1, and the physical mean square equals the plain spectral
// sum of squares (Parseval).

#include <catch2/catch_amalgamated.hpp>

#include "matfield/core.hpp"
#include "matfield/fft.hpp"
#include "matfield/rng.hpp"

using namespace matfield;

namespace {

// O(N^2) direct DFT with the library's convention
Field direct_forward(const Field& f) {
    const Grid& g = f.grid();
    Field out(g, f.kind(), Rep::spectral);
    const std::size_t np = g.points();
    int kx[4], xx[4];
    for (std::size_t p = 0; p < np; ++p) {
        decode_point(p, g, kx);
        for (int c = 0; c < f.ncomp(); ++c) {
            complexd acc(0.0, 0.0);
            for (std::size_t q = 0; q < np; ++q) {
                decode_point(q, g, xx);
                double phase = 0.0;
                for (int a = 0; a < g.d; ++a) phase += static_cast<double>(kx[a]) * xx[a];
                phase *= -two_pi / g.n;
                acc += f.at(q, c) * complexd(std::cos(phase), std::sin(phase));
            }
            out.at(p, c) = acc / static_cast<double>(np);
        }
    }
    return out;
}

Field random_physical(const Grid& g, FieldKind kind, std::uint64_t seed) {
    // arbitrary complex-valued physical data; exercises the transform fully
    Field f(g, kind, Rep::physical);
    std::uint64_t ctr = seed;
    for (std::size_t p = 0; p < g.points(); ++p)
        for (int c = 0; c < f.ncomp(); ++c)
            f.at(p, c) = complexd(detail::uniform_pm1(ctr++), detail::uniform_pm1(ctr++));
    return f;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("forward transform matches the direct DFT oracle") {
    struct Case {
        int d, n;
    };
    // n = 8 exercises the radix-2 path, n = 12 the Bluestein path
    for (Case c : {Case{2, 8}, Case{2, 12}, Case{3, 8}}) {
        Grid g = make_grid(c.d, c.n, 1.0);
        Field f = random_physical(g, FieldKind::vector, 1000 + c.d * 10 + c.n);
        Field fast = forward_transform(f);
        Field slow = direct_forward(f);
        INFO("d=" << c.d << " n=" << c.n);
        REQUIRE(max_diff(fast, slow) < 1e-12);
    }
}

TEST_CASE("round trip returns the input") {
    for (int n : {8, 12, 20}) {
        Grid g = make_grid(2, n, 1.0);
        Field f = random_physical(g, FieldKind::sym_matrix, 7 + n);
        Field back = inverse_transform(forward_transform(f));
        INFO("n=" << n);
        REQUIRE(max_diff(f, back) < 1e-12);
        REQUIRE(back.rep() == Rep::physical);
    }
}

TEST_CASE("known coefficients anchor the convention") {
    Grid g = make_grid(3, 8, 2.0);
    SECTION("constant field") {
        Field f(g, FieldKind::scalar, Rep::physical);
        f.fill(complexd(3.25, 0.0));
        Field F = forward_transform(f);
        REQUIRE(std::abs(F.at(0, 0) - complexd(3.25, 0.0)) < 1e-13);
        double off = 0.0;
        for (std::size_t p = 1; p < g.points(); ++p) off = std::max(off, std::abs(F[p]));
        REQUIRE(off < 1e-13);
    }
    SECTION("single cosine along the first axis") {
        Field f(g, FieldKind::scalar, Rep::physical);
        int ix[4];
        for (std::size_t p = 0; p < g.points(); ++p) {
            decode_point(p, g, ix);
            f[p] = complexd(std::cos(two_pi * (ix[0] * g.dx()) / g.L), 0.0);
        }
        Field F = forward_transform(f);
        // modes k = +-(1,0,0); with the last axis fastest, the flat index of
        // (k0,0,0) is k0 * n^2
        const std::size_t plus = 1 * g.n * g.n;
        const std::size_t minus = static_cast<std::size_t>(g.n - 1) * g.n * g.n;
        REQUIRE(std::abs(F[plus] - complexd(0.5, 0.0)) < 1e-13);
        REQUIRE(std::abs(F[minus] - complexd(0.5, 0.0)) < 1e-13);
        F[plus] = F[minus] = complexd(0.0, 0.0);
        REQUIRE(max_abs(F) < 1e-13);
    }
    SECTION("single sine along the last axis") {
        Field f(g, FieldKind::scalar, Rep::physical);
        int ix[4];
        for (std::size_t p = 0; p < g.points(); ++p) {
            decode_point(p, g, ix);
            f[p] = complexd(std::sin(two_pi * (ix[2] * g.dx()) / g.L), 0.0);
        }
        Field F = forward_transform(f);
        REQUIRE(std::abs(F[1] - complexd(0.0, -0.5)) < 1e-13);
        REQUIRE(std::abs(F[g.n - 1] - complexd(0.0, 0.5)) < 1e-13);
    }
}

TEST_CASE("Parseval: physical mean square equals spectral sum of squares") {
    for (int d : {2, 3}) {
        Grid g = make_grid(d, 12, 1.5);
        for (FieldKind k : {FieldKind::scalar, FieldKind::vector, FieldKind::sym_matrix, FieldKind::antisym_matrix}) {
            Field f = random_physical(g, k, 400 + d + static_cast<int>(k));
            Field F = forward_transform(f);
            INFO("d=" << d << " kind=" << to_string(k));
            REQUIRE(norm2(f) == Catch::Approx(norm2(F)).epsilon(1e-12));
        }
    }
}

TEST_CASE("transforms are linear") {
    Grid g = make_grid(2, 12, 1.0);
    Field a = random_physical(g, FieldKind::scalar, 11);
    Field b = random_physical(g, FieldKind::scalar, 12);
    Field lhs = forward_transform(a + b);
    Field rhs = forward_transform(a) + forward_transform(b);
    REQUIRE(max_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("random spectral fields are Hermitian and invert to real data") {
    for (int d : {2, 3, 4}) {
        Grid g = make_grid(d, 8, 1.0);
        Field F = random_field(g, FieldKind::sym_matrix, 2.0, 99 + d);
        Field f = inverse_transform(F);
        double im = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) im = std::max(im, std::abs(f[i].imag()));
        INFO("d=" << d);
        REQUIRE(im < 1e-12);
        REQUIRE(norm(F) > 0.0);
    }
}
