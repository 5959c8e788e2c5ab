#pragma once
// Field containers on the periodic box [0,L)^d, sampled on a uniform n^d grid.
//
// A Field holds one of four value types (scalar, vector, symmetric matrix,
// antisymmetric matrix) in either point-sample ("physical") or Fourier
// ("spectral") representation.  Data are complex in both representations so
// that the two are interchangeable containers; physical samples of real
// fields carry ~0 imaginary parts.
//
// Layout: points are row-major over the d axes (last axis fastest) and the
// value components are fastest-varying overall, i.e. data[point*ncomp + c].
// Matrix components are stored as the upper triangle in row-major order:
//   symmetric  d=3: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
//   antisym    d=3: (0,1) (0,2) (1,2)
//
// Mode indexing: axis index i in [0,n) carries the signed wavenumber
//   k = i            for i <= n/2
//   k = i - n        otherwise
// so k ranges over {-n/2+1, ..., n/2}; the frequency is xi = k/L.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace matfield {

using complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

// ---------------------------------------------------------------------------
// errors

// Invalid configuration or argument (bad grid size, wrong field kind, ...).
// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical precondition that must hold on the data failed (e.g. a field
// that has to be divergence-free measurably is not).  Carries the measured
// residual for diagnostics.
struct precondition_error : std::runtime_error {
    double measured = 0.0;
    precondition_error(const std::string& what, double measured_residual)
        : std::runtime_error(what), measured(measured_residual) {}
};

// ---------------------------------------------------------------------------
// grid

struct Grid {
    int d = 3;       // spatial dimension, 2..4
    int n = 0;       // samples per axis, even, 8..512
    double L = 1.0;  // box edge length

    std::size_t points() const {
        std::size_t p = 1;
        for (int a = 0; a < d; ++a) p *= static_cast<std::size_t>(n);
        return p;
    }
    double dx() const { return L / n; }

    // signed wavenumber of axis index i
    int signed_mode(int i) const { return (i <= n / 2) ? i : i - n; }
    // frequency xi = k/L of axis index i
    double xi(int i) const { return signed_mode(i) / L; }

    bool operator==(const Grid& o) const { return d == o.d && n == o.n && L == o.L; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline Grid make_grid(int d, int n, double L = 1.0) {
    if (d < 2 || d > 4) throw config_error("make_grid: dimension must be 2, 3 or 4, got " + std::to_string(d));
    if (n < 8 || n > 512 || n % 2 != 0)
        throw config_error("make_grid: n must be even and in [8,512], got " + std::to_string(n));
    if (!(L > 0.0)) throw config_error("make_grid: box length must be positive");
    return Grid{d, n, L};
}

// ---------------------------------------------------------------------------
// field kinds

enum class FieldKind { scalar, vector, sym_matrix, antisym_matrix };
enum class Rep { physical, spectral };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::scalar: return "scalar";
        case FieldKind::vector: return "vector";
        case FieldKind::sym_matrix: return "symmatrix";
        case FieldKind::antisym_matrix: return "antisymmatrix";
    }
    return "?";
}
inline const char* to_string(Rep r) { return r == Rep::physical ? "physical" : "spectral"; }

inline FieldKind field_kind_from_string(const std::string& s) {
    if (s == "scalar") return FieldKind::scalar;
    if (s == "vector") return FieldKind::vector;
    if (s == "symmatrix") return FieldKind::sym_matrix;
    if (s == "antisymmatrix") return FieldKind::antisym_matrix;
    throw config_error("unknown field kind '" + s + "'");
}
inline Rep rep_from_string(const std::string& s) {
    if (s == "physical") return Rep::physical;
    if (s == "spectral") return Rep::spectral;
    throw config_error("unknown representation '" + s + "'");
}

inline int component_count(FieldKind k, int d) {
    switch (k) {
        case FieldKind::scalar: return 1;
        case FieldKind::vector: return d;
        case FieldKind::sym_matrix: return d * (d + 1) / 2;
        case FieldKind::antisym_matrix: return d * (d - 1) / 2;
    }
    return 0;
}

// flat component index of symmetric entry (i,j), i <= j, upper-tri row-major
inline int sym_index(int i, int j, int d) {
    return i * d - i * (i - 1) / 2 + (j - i);
}
// flat component index of antisymmetric entry (i,j), i < j
inline int antisym_index(int i, int j, int d) {
    return i * (2 * d - i - 1) / 2 + (j - i - 1);
}

// L2 weight of a stored component: off-diagonal matrix entries represent two
// entries of the full matrix, so |M|^2 = sum_c weight(c) |M_c|^2.
inline double component_weight(FieldKind k, int d, int c) {
    if (k == FieldKind::antisym_matrix) return 2.0;
    if (k == FieldKind::sym_matrix) {
        // diagonal entries sit at sym_index(i,i,d)
        for (int i = 0; i < d; ++i)
            if (c == sym_index(i, i, d)) return 1.0;
        return 2.0;
    }
    return 1.0;
}

// ---------------------------------------------------------------------------
// field

class Field {
  public:
    Field() = default;
    Field(const Grid& g, FieldKind kind, Rep rep)
        : grid_(g), kind_(kind), rep_(rep), ncomp_(component_count(kind, g.d)),
          data_(g.points() * static_cast<std::size_t>(component_count(kind, g.d))) {}

    const Grid& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }
    Rep rep() const { return rep_; }
    void set_rep(Rep r) { rep_ = r; }
    int ncomp() const { return ncomp_; }
    std::size_t points() const { return grid_.points(); }
    std::size_t size() const { return data_.size(); }

    complexd& operator[](std::size_t i) { return data_[i]; }
    const complexd& operator[](std::size_t i) const { return data_[i]; }
    complexd& at(std::size_t point, int c) { return data_[point * ncomp_ + c]; }
    const complexd& at(std::size_t point, int c) const { return data_[point * ncomp_ + c]; }

    complexd* data() { return data_.data(); }
    const complexd* data() const { return data_.data(); }

    void fill(complexd v) { std::fill(data_.begin(), data_.end(), v); }

  private:
    Grid grid_{};
    FieldKind kind_ = FieldKind::scalar;
    Rep rep_ = Rep::physical;
    int ncomp_ = 0;
    std::vector<complexd> data_;
};

inline void require_kind(const Field& f, FieldKind k, const char* where) {
    if (f.kind() != k)
        throw config_error(std::string(where) + ": expected " + to_string(k) + " field, got " + to_string(f.kind()));
}
inline void require_rep(const Field& f, Rep r, const char* where) {
    if (f.rep() != r)
        throw config_error(std::string(where) + ": expected " + to_string(r) + " representation");
}
inline void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (a.grid() != b.grid()) throw config_error(std::string(where) + ": grid mismatch");
}

// ---------------------------------------------------------------------------
// multi-index decoding

// Decode flat point index into per-axis indices (last axis fastest).
inline void decode_point(std::size_t p, const Grid& g, int* ix) {
    for (int a = g.d - 1; a >= 0; --a) {
        ix[a] = static_cast<int>(p % g.n);
        p /= g.n;
    }
}

// ---------------------------------------------------------------------------
// norms and inner products
//
// Physical norm is the mean square over grid points; spectral norm is the
// plain sum of squared coefficient magnitudes.  With the transform convention
// of fft.hpp (1/n^d on the forward transform) these agree (Parseval).

inline double norm2(const Field& f) {
    const int nc = f.ncomp();
    double acc = 0.0;
    // component weights as a small table
    double w[16];
    for (int c = 0; c < nc; ++c) w[c] = component_weight(f.kind(), f.grid().d, c);
    const complexd* p = f.data();
    const std::size_t np = f.points();
    for (std::size_t i = 0; i < np; ++i, p += nc)
        for (int c = 0; c < nc; ++c) acc += w[c] * std::norm(p[c]);
    if (f.rep() == Rep::physical) acc /= static_cast<double>(np);
    return acc;
}

inline double norm(const Field& f) { return std::sqrt(norm2(f)); }

// real L2 inner product <a,b> = sum Re(a conj(b)), with matrix weights
inline double inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner");
    if (a.kind() != b.kind() || a.rep() != b.rep()) throw config_error("inner: kind/rep mismatch");
    const int nc = a.ncomp();
    double w[16];
    for (int c = 0; c < nc; ++c) w[c] = component_weight(a.kind(), a.grid().d, c);
    double acc = 0.0;
    const complexd* pa = a.data();
    const complexd* pb = b.data();
    const std::size_t np = a.points();
    for (std::size_t i = 0; i < np; ++i, pa += nc, pb += nc)
        for (int c = 0; c < nc; ++c)
            acc += w[c] * (pa[c].real() * pb[c].real() + pa[c].imag() * pb[c].imag());
    if (a.rep() == Rep::physical) acc /= static_cast<double>(np);
    return acc;
}

// max over points/modes of the pointwise value magnitude (unweighted)
inline double max_abs(const Field& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

// ---------------------------------------------------------------------------
// elementwise arithmetic helpers

inline Field& operator+=(Field& a, const Field& b) {
    require_same_grid(a, b, "operator+=");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline Field& operator-=(Field& a, const Field& b) {
    require_same_grid(a, b, "operator-=");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline Field& operator*=(Field& a, double s) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= s;
    return a;
}
inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator*(double s, Field a) { a *= s; return a; }

// a += s*b
inline void axpy(Field& a, double s, const Field& b) {
    require_same_grid(a, b, "axpy");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

}  // namespace matfield
