#pragma once
// Complex-to-complex FFT and d-dimensional field transforms.
//
// Transform convention (fixes Parseval as used throughout):
//   forward:  F(k) = (1/n^d) sum_x f(x) e^{-2 pi i k.x / n}
//   inverse:  f(x) =         sum_k F(k) e^{+2 pi i k.x / n}
// so a constant field c has the single spectral value c at mode 0, and the
// physical mean square equals the spectral sum of squares.
//
// Power-of-two lengths use an iterative radix-2 Cooley-Tukey; other (even)
// lengths go through Bluestein's chirp-z reduction to a power-of-two FFT.

#include <cstddef>
#include <vector>

#include "matfield/core.hpp"

namespace matfield {

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

// In-place radix-2 FFT, unnormalized: a[k] <- sum_j a[j] e^{sign 2 pi i jk/n}.
// twiddle must hold e^{sign 2 pi i j / n} for j in [0, n/2).
inline void fft_pow2(complexd* a, int n, const complexd* twiddle) {
    // bit-reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; ++j) {
                const complexd w = twiddle[static_cast<std::size_t>(j) * step];
                const complexd u = a[i + j];
                const complexd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace detail

// One-dimensional transform plan for a fixed length and sign; reusable across
// many lines.  sign = -1 is the forward exponent, +1 the inverse.
class FftPlan {
  public:
    FftPlan() = default;
    FftPlan(int n, int sign) : n_(n), sign_(sign) {
        if (detail::is_pow2(n_)) {
            m_ = n_;
            twiddle_ = make_twiddle(m_, sign_);
            return;
        }
        // Bluestein: X_k = c_k * (a * b)_k with a_j = x_j c_j,
        // c_j = e^{sign pi i j^2 / n}, b_j = conj(c_j) wrapped cyclically.
        m_ = detail::next_pow2(2 * n_ - 1);
        twiddle_ = make_twiddle(m_, -1);
        itwiddle_ = make_twiddle(m_, +1);
        chirp_.resize(n_);
        for (int j = 0; j < n_; ++j) {
            // j^2 mod 2n keeps the phase argument small and exact
            const long long q = (static_cast<long long>(j) * j) % (2LL * n_);
            const double phase = sign_ * pi * static_cast<double>(q) / n_;
            chirp_[j] = complexd(std::cos(phase), std::sin(phase));
        }
        bhat_.assign(m_, complexd(0.0, 0.0));
        bhat_[0] = std::conj(chirp_[0]);
        for (int j = 1; j < n_; ++j) {
            bhat_[j] = std::conj(chirp_[j]);
            bhat_[m_ - j] = std::conj(chirp_[j]);
        }
        detail::fft_pow2(bhat_.data(), m_, twiddle_.data());
        work_.resize(m_);
    }

    int length() const { return n_; }

    // In-place unnormalized transform of one contiguous line of length n.
    void run(complexd* a) const {
        if (m_ == n_) {
            detail::fft_pow2(a, n_, twiddle_.data());
            return;
        }
        complexd* w = work_.data();
        for (int j = 0; j < n_; ++j) w[j] = a[j] * chirp_[j];
        for (int j = n_; j < m_; ++j) w[j] = complexd(0.0, 0.0);
        detail::fft_pow2(w, m_, twiddle_.data());
        for (int j = 0; j < m_; ++j) w[j] *= bhat_[j];
        detail::fft_pow2(w, m_, itwiddle_.data());
        const double scale = 1.0 / m_;
        for (int j = 0; j < n_; ++j) a[j] = w[j] * chirp_[j] * scale;
    }

  private:
    static std::vector<complexd> make_twiddle(int m, int sign) {
        std::vector<complexd> t(m / 2);
        for (int j = 0; j < m / 2; ++j) {
            const double phase = sign * two_pi * j / m;
            t[j] = complexd(std::cos(phase), std::sin(phase));
        }
        return t;
    }

    int n_ = 0;
    int sign_ = -1;
    int m_ = 0;                        // pow2 working length (== n_ when radix-2)
    std::vector<complexd> twiddle_;    // sign_ table (pow2) or forward table (bluestein)
    std::vector<complexd> itwiddle_;   // inverse table (bluestein only)
    std::vector<complexd> chirp_;      // e^{sign pi i j^2/n}
    std::vector<complexd> bhat_;       // FFT of wrapped conj chirp
    mutable std::vector<complexd> work_;
};

namespace detail {

// Apply the 1-d transform along every axis of every component, in place on
// the raw field data.  No normalization.
inline void transform_all_axes(complexd* data, const Grid& g, int ncomp, int sign) {
    const FftPlan plan(g.n, sign);
    const std::size_t npts = g.points();
    std::vector<complexd> line(g.n);
    // stride (in points) between neighbors along axis a: n^{d-1-a}
    for (int a = 0; a < g.d; ++a) {
        std::size_t stride = 1;
        for (int b = g.d - 1; b > a; --b) stride *= g.n;
        const std::size_t block = stride * g.n;  // points spanned by one line set
        for (std::size_t base = 0; base < npts; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int c = 0; c < ncomp; ++c) {
                    complexd* p = data + (base + off) * ncomp + c;
                    const std::size_t step = stride * ncomp;
                    for (int i = 0; i < g.n; ++i) line[i] = p[i * step];
                    plan.run(line.data());
                    for (int i = 0; i < g.n; ++i) p[i * step] = line[i];
                }
            }
        }
    }
}

}  // namespace detail

// physical -> spectral
inline Field forward_transform(const Field& f) {
    require_rep(f, Rep::physical, "forward_transform");
    Field out = f;
    detail::transform_all_axes(out.data(), f.grid(), f.ncomp(), -1);
    const double scale = 1.0 / static_cast<double>(f.points());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale;
    out.set_rep(Rep::spectral);
    return out;
}

// spectral -> physical
inline Field inverse_transform(const Field& f) {
    require_rep(f, Rep::spectral, "inverse_transform");
    Field out = f;
    detail::transform_all_axes(out.data(), f.grid(), f.ncomp(), +1);
    out.set_rep(Rep::physical);
    return out;
}

enum class Direction { forward, inverse };

inline Field transform(const Field& f, Direction dir) {
    return dir == Direction::forward ? forward_transform(f) : inverse_transform(f);
}

// Convenience: spectral copy of f whatever its representation.
inline Field as_spectral(const Field& f) { return f.rep() == Rep::spectral ? f : forward_transform(f); }
// Convenience: physical copy of f whatever its representation.
inline Field as_physical(const Field& f) { return f.rep() == Rep::physical ? f : inverse_transform(f); }

}  // namespace matfield
