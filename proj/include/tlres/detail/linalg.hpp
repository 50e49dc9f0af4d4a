#pragma once
// Tiny fixed-size linear algebra for the calibration and fitting routines.

#include <array>
#include <cmath>

#include "../core.hpp"

namespace tlres::detail {

struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    double det() const { return a11 * a22 - a12 * a21; }

    // Largest over smallest singular value.
    double condition_number() const {
        const double t = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double d = det();
        const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
        const double smax2 = 0.5 * (t + disc);
        const double smin2 = 0.5 * (t - disc);
        if (!(smin2 > 0.0)) return infinity;
        return std::sqrt(smax2 / smin2);
    }

    Mat2 inverse() const {
        const double d = det();
        // scale-invariant test: det/smax^2 ~ 1/cond, so this rejects cond > ~1e14
        const double t = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        if (std::fabs(d) <= 1e-300 || std::fabs(d) < 1e-14 * t)
            throw singular_error("2x2 system is singular");
        return Mat2{a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

struct Vec2 {
    double x1 = 0, x2 = 0;
};

inline Vec2 solve2(const Mat2& m, double b1, double b2) {
    const Mat2 inv = m.inverse();
    return Vec2{inv.a11 * b1 + inv.a12 * b2, inv.a21 * b1 + inv.a22 * b2};
}

// Gaussian elimination with partial pivoting for a 3x3 system.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-300) throw singular_error("3x3 system is singular");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double m = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

} // namespace tlres::detail
