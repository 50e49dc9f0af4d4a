#pragma once
// Bracketed scalar root finding and 1-D minimisation used by the solvers.

#include <cmath>
#include <utility>

#include "../core.hpp"

namespace tlres::detail {

// Root of a continuous f on [lo, hi] with f(lo) and f(hi) of opposite sign.
// Bisection safeguarded with secant steps; converges to rel_tol on the abscissa.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double rel_tol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw numerical_error("root bracket does not change sign");
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (a + b);
        // secant proposal, accepted only when it stays well inside the bracket
        double x = mid;
        const double df = fb - fa;
        if (df != 0.0) {
            const double s = b - fb * (b - a) / df;
            const double margin = 0.01 * (b - a);
            if (s > a + margin && s < b - margin) x = s;
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= rel_tol * std::max(std::fabs(a), std::fabs(b))) return 0.5 * (a + b);
    }
    return 0.5 * (a + b);
}

// Golden-section minimiser for a unimodal f on [lo, hi].
template <class F>
double minimize_golden(F&& f, double lo, double hi, double rel_tol, int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (b - a <= rel_tol * (std::fabs(a) + std::fabs(b) + 1e-300)) break;
    }
    return 0.5 * (a + b);
}

} // namespace tlres::detail
