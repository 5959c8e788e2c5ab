#pragma once
// Deterministic random fields.
//
// Spectral coefficients are drawn from a counter-based generator (splitmix64
// applied to a key mixed from seed, mode and component), so a field is a pure
// function of (grid, kind, decay, seed) independent of evaluation order.
// Amplitudes scale like (1+|k|)^{-decay}; coefficients respect the Hermitian
// pairing F(-k) = conj(F(k)) so the physical field is real.  Modes on any
// Nyquist plane (k_a = n/2) are left zero: those planes cannot carry a phase
// on a real grid and would break the oddness of first-derivative multipliers.

#include <cstdint>

#include "matfield/core.hpp"

namespace matfield {

namespace detail {

// standard splitmix64 mixer
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform double in [-1, 1)
inline double uniform_pm1(std::uint64_t key) {
    return static_cast<double>(splitmix64(key) >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace detail

// Random spectral field; see header comment for the construction.
inline Field random_field(const Grid& g, FieldKind kind, double decay, std::uint64_t seed) {
    Field f(g, kind, Rep::spectral);
    const int d = g.d, n = g.n, nc = f.ncomp();

    // amplitude lookup by integer |k|^2 (exact for n <= 512)
    const int k2max = d * (n / 2) * (n / 2);
    std::vector<double> amp(static_cast<std::size_t>(k2max) + 1);
    for (int q = 0; q <= k2max; ++q) amp[q] = std::pow(1.0 + std::sqrt(static_cast<double>(q)), -decay);

    const std::size_t npts = g.points();
    int ix[4];
    for (std::size_t p = 0; p < npts; ++p) {
        decode_point(p, g, ix);
        bool nyquist = false, self_conj = true;
        int k2 = 0;
        std::size_t pneg = 0;  // flat index of -k (mod n)
        for (int a = 0; a < d; ++a) {
            if (ix[a] == n / 2) nyquist = true;
            if (ix[a] != 0) self_conj = false;  // with Nyquist planes zeroed, only k=0 pairs with itself
            const int k = g.signed_mode(ix[a]);
            k2 += k * k;
            const int neg = (n - ix[a]) % n;
            pneg = pneg * n + static_cast<std::size_t>(neg);
        }
        if (nyquist) continue;   // stays zero
        if (pneg < p) continue;  // filled when its partner was visited
        const double a0 = amp[k2];
        for (int c = 0; c < nc; ++c) {
            const std::uint64_t key = detail::splitmix64(seed ^ (0x632be59bd9b4e019ULL + p)) + static_cast<std::uint64_t>(c);
            const double re = a0 * detail::uniform_pm1(key);
            const double im = self_conj ? 0.0 : a0 * detail::uniform_pm1(~key);
            f.at(p, c) = complexd(re, im);
            f.at(pneg, c) = complexd(re, -im);
        }
    }
    return f;
}

}  // namespace matfield
