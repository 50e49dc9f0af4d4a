#pragma once
// Independent microwave-network oracle: complex S21 of a notch-type hanger,
// a matched feedline shunt-tapped by a coupling capacitor in series with a
// lossy line terminated by the load. Everything here is plain cascade circuit
// algebra so it shares no derivation with the closed-form solver it checks.

#include <cmath>
#include <complex>
#include <vector>

#include "core.hpp"
#include "detail/rootfind.hpp"
#include "resonance.hpp"
#include "trace.hpp"
#include "txline.hpp"

namespace tlres {

struct HangerNetwork {
    LineSpec line{};
    LoadModel load{};
    double coupling_c = 0.0; // farad
    double feed_z0 = 50.0;   // ohm

    void validate() const {
        line.validate();
        load.validate();
        detail::check_positive(coupling_c, "coupling_c");
        detail::check_positive(feed_z0, "feed_z0");
    }
};

// One-way attenuation of the resonator line at frequency f, as alpha * length.
// An open-ended run of this line resonates at f_open with quality q_open_ref,
// which pins alpha * length = pi / (2 q_open_ref) there; the power law in
// frequency then scales it across the sweep.
inline double alpha_length(const LineSpec& line, double f) {
    line.validate();
    detail::check_positive(f, "f");
    if (std::isinf(line.attenuation.q_open_ref)) return 0.0;
    return pi / (2.0 * line.attenuation.q_open_ref) *
           std::pow(f / line.f_open, line.attenuation.exponent_s);
}

// Impedance looking into the loaded line from the coupling end. An infinite
// z_load is treated as an open-circuit termination.
inline complex input_impedance(const LineSpec& line, complex z_load, double f) {
    const complex gl(alpha_length(line, f), pi * f / line.f_open);
    const complex th = std::tanh(gl);
    const double z0 = line.z0;
    if (!std::isfinite(z_load.real()) || !std::isfinite(z_load.imag())) return z0 / th;
    return z0 * (z_load + z0 * th) / (z0 + z_load * th);
}

// S21 of the hanger at a single frequency. The shunt branch impedance is kept
// in numerator/denominator form so the half-wave pole of the line input
// impedance never divides by zero: there the branch is fully blocked and the
// transmission is exactly unity.
inline complex hanger_s21_at(const HangerNetwork& net, double f) {
    detail::check_positive(f, "f");
    const complex zl = load_impedance(net.load, f);
    const complex gl(alpha_length(net.line, f), pi * f / net.line.f_open);
    const complex th = std::tanh(gl);
    const double z0 = net.line.z0;
    const complex num = z0 * (zl + z0 * th); // line input impedance = num / den
    const complex den = z0 + zl * th;
    const complex z_c = 1.0 / complex(0.0, two_pi * f * net.coupling_c);
    const complex shunt = z_c * den + num;   // shunt branch impedance * den
    return shunt / (shunt + 0.5 * net.feed_z0 * den);
}

inline ComplexTrace synth_s21(const HangerNetwork& net, const std::vector<double>& freqs) {
    net.validate();
    ComplexTrace trace;
    trace.freqs = freqs;
    trace.s21.reserve(freqs.size());
    for (double f : freqs) trace.s21.push_back(hanger_s21_at(net, f));
    trace.validate(); // also rejects unsorted or non-positive grids
    return trace;
}

// Chain matrix view of the same network: the whole hanger is one shunt
// admittance on the matched feed.
struct Abcd {
    complex a{1.0, 0.0};
    complex b{0.0, 0.0};
    complex c{0.0, 0.0};
    complex d{1.0, 0.0};
    complex determinant() const { return a * d - b * c; }
};

inline Abcd hanger_abcd(const HangerNetwork& net, double f) {
    net.validate();
    detail::check_positive(f, "f");
    const complex z_in = input_impedance(net.line, load_impedance(net.load, f), f);
    const complex z_sh = 1.0 / complex(0.0, two_pi * f * net.coupling_c) + z_in;
    Abcd m;
    m.c = 1.0 / z_sh;
    return m;
}

inline complex abcd_s21(const Abcd& m, double z_ref) {
    detail::check_positive(z_ref, "z_ref");
    return 2.0 / (m.a + m.b / z_ref + m.c * z_ref + m.d);
}

inline complex abcd_s12(const Abcd& m, double z_ref) {
    detail::check_positive(z_ref, "z_ref");
    return 2.0 * m.determinant() / (m.a + m.b / z_ref + m.c * z_ref + m.d);
}

// Notch frequency: argmin of |S21| inside [f_lo, f_hi]. An iterative zoom
// scan rides the resonance tails down to the dip whatever the linewidth, then
// golden section polishes the bracket.
inline double locate_notch(const HangerNetwork& net, double f_lo, double f_hi) {
    net.validate();
    if (!(f_lo > 0.0) || !(f_hi > f_lo))
        throw domain_error("notch search needs 0 < f_lo < f_hi");
    const auto mag = [&](double f) { return std::abs(hanger_s21_at(net, f)); };
    double lo = f_lo;
    double hi = f_hi;
    int edge_expansions = 0;
    for (int iter = 0; iter < 80; ++iter) {
        constexpr int n = 201;
        const double step = (hi - lo) / (n - 1);
        double best = mag(lo);
        int best_i = 0;
        for (int i = 1; i < n; ++i) {
            const double v = mag(lo + step * i);
            if (v < best) {
                best = v;
                best_i = i;
            }
        }
        if (best_i == 0 || best_i == n - 1) {
            // minimum sits on the window edge: grow the window that way
            if (++edge_expansions > 40)
                throw numerical_error("no notch inside the search window");
            const double span = hi - lo;
            if (best_i == 0)
                lo = std::max(lo - span, 0.5 * lo);
            else
                hi += span;
            continue;
        }
        const double new_lo = lo + step * (best_i - 1);
        const double new_hi = lo + step * (best_i + 1);
        lo = new_lo;
        hi = new_hi;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return detail::minimize_golden(mag, lo, hi, 1e-15, 200);
}

struct PullReport {
    double f_r_analytic = 0.0;
    double f_notch = 0.0;
    double pull_hz = 0.0; // f_notch - f_r_analytic
};

// Deviation of the synthesised notch from the closed-form resonance caused by
// the finite coupling capacitor.
inline PullReport frequency_pull(const HangerNetwork& net, int mode_n,
                                 double window_rel = 0.05) {
    net.validate();
    const auto sol = solve_resonance(net.line, net.load, mode_n);
    PullReport rep;
    rep.f_r_analytic = sol.f_r;
    rep.f_notch =
        locate_notch(net, sol.f_r * (1.0 - window_rel), sol.f_r * (1.0 + window_rel));
    rep.pull_hz = rep.f_notch - rep.f_r_analytic;
    return rep;
}

// Shrink the coupling capacitor until the notch sits within target_rel of the
// closed-form resonance. Halving converges because the pull shrinks with the
// coupling admittance.
inline HangerNetwork tune_coupling_for_pull(HangerNetwork net, int mode_n,
                                            double target_rel = 8e-6) {
    net.validate();
    detail::check_positive(target_rel, "target_rel");
    for (int it = 0; it < 70; ++it) {
        const auto rep = frequency_pull(net, mode_n);
        if (std::fabs(rep.pull_hz) <= target_rel * rep.f_r_analytic) return net;
        net.coupling_c *= 0.5;
        if (net.coupling_c < 1e-18)
            throw numerical_error("coupling floor reached without meeting the pull target");
    }
    throw numerical_error("coupling tuning did not converge");
}

struct NotchWindow {
    double f_notch = 0.0;
    double fwhm = 0.0;       // full width of the dip at half depth
    double depth = 0.0;      // background magnitude minus floor magnitude
    double background = 0.0; // off-resonance |S21| at the window edges
};

// Geometry of the dip around one mode, for building fit-ready sweep grids.
inline NotchWindow find_notch_window(const HangerNetwork& net, int mode_n,
                                     double window_rel = 0.05) {
    net.validate();
    const auto sol = solve_resonance(net.line, net.load, mode_n);
    const double lo = sol.f_r * (1.0 - window_rel);
    const double hi = sol.f_r * (1.0 + window_rel);
    const auto mag = [&](double f) { return std::abs(hanger_s21_at(net, f)); };
    NotchWindow w;
    w.f_notch = locate_notch(net, lo, hi);
    w.background = 0.5 * (mag(lo) + mag(hi));
    const double floor_mag = mag(w.f_notch);
    w.depth = w.background - floor_mag;
    if (!(w.depth > 0.0)) throw numerical_error("no visible notch in the window");
    const double half = floor_mag + 0.5 * w.depth;
    const auto level = [&](double f) { return mag(f) - half; };
    const double right = detail::solve_bracketed(level, w.f_notch, hi, 1e-14, 200);
    const double left = detail::solve_bracketed(level, lo, w.f_notch, 1e-14, 200);
    w.fwhm = right - left;
    return w;
}

// Uniform frequency grid centred on f_center.
inline std::vector<double> linear_grid(double f_center, double span, int n) {
    detail::check_positive(f_center, "f_center");
    detail::check_positive(span, "span");
    if (n < 2) throw domain_error("grid needs at least 2 points");
    const double lo = f_center - 0.5 * span;
    if (!(lo > 0.0)) throw domain_error("grid extends to non-positive frequency");
    std::vector<double> freqs(static_cast<std::size_t>(n));
    const double step = span / (n - 1);
    for (int i = 0; i < n; ++i) freqs[static_cast<std::size_t>(i)] = lo + step * i;
    freqs.back() = f_center + 0.5 * span;
    return freqs;
}

} // namespace tlres
