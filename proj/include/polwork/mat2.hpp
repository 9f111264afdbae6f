// mat2.hpp — 2x2 complex matrix algebra used throughout the library.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace polwork {

using cplx = std::complex<double>;

/// Dense 2x2 complex matrix, row major. Value type: all operations return
/// new matrices, nothing is heap allocated.
struct Mat2C {
    std::array<cplx, 4> m{};

    constexpr cplx& operator()(int r, int c) { return m[2 * r + c]; }
    constexpr const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    static constexpr Mat2C zero() { return {}; }
    static constexpr Mat2C identity() { return {{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}}}; }

    friend Mat2C operator+(const Mat2C& a, const Mat2C& b) {
        return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}};
    }
    friend Mat2C operator-(const Mat2C& a, const Mat2C& b) {
        return {{a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]}};
    }
    friend Mat2C operator*(const Mat2C& a, const Mat2C& b) {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }
    friend Mat2C operator*(cplx s, const Mat2C& a) {
        return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
    }
    friend Mat2C operator*(double s, const Mat2C& a) { return cplx{s} * a; }
    friend Mat2C operator*(const Mat2C& a, cplx s) { return s * a; }
    Mat2C& operator+=(const Mat2C& b) {
        for (int i = 0; i < 4; ++i) m[i] += b.m[i];
        return *this;
    }
    Mat2C& operator-=(const Mat2C& b) {
        for (int i = 0; i < 4; ++i) m[i] -= b.m[i];
        return *this;
    }
    Mat2C& operator*=(cplx s) {
        for (int i = 0; i < 4; ++i) m[i] *= s;
        return *this;
    }
};

inline Mat2C adjoint(const Mat2C& a) {
    return {{std::conj(a.m[0]), std::conj(a.m[2]), std::conj(a.m[1]), std::conj(a.m[3])}};
}

inline cplx trace(const Mat2C& a) { return a.m[0] + a.m[3]; }

inline Mat2C commutator(const Mat2C& a, const Mat2C& b) { return a * b - b * a; }

inline Mat2C anticommutator(const Mat2C& a, const Mat2C& b) { return a * b + b * a; }

/// Max absolute entry.
inline double max_norm(const Mat2C& a) {
    double v = 0.0;
    for (const auto& x : a.m) v = std::max(v, std::abs(x));
    return v;
}

/// Frobenius norm.
inline double frob_norm(const Mat2C& a) {
    double s = 0.0;
    for (const auto& x : a.m) s += std::norm(x);
    return std::sqrt(s);
}

inline bool all_finite(const Mat2C& a) {
    for (const auto& x : a.m)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

// Pauli matrices.
inline const Mat2C sigma_x{{cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}}};
inline const Mat2C sigma_y{{cplx{0.0}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{0.0}}};
inline const Mat2C sigma_z{{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{-1.0}}};

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2C& h) {
    const double tr = (h.m[0] + h.m[3]).real();
    const double det = (h.m[0] * h.m[3] - h.m[1] * h.m[2]).real();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

}  // namespace polwork
