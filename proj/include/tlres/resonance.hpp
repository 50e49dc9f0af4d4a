#pragma once
// Resonances of a transmission line open at the measurement port and closed by
// a reactive load at the far end: mode frequencies, energy participation of
// the load, standing-wave profiles, and design points of maximum sensitivity.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "detail/rootfind.hpp"
#include "txline.hpp"

namespace tlres {

// Phase accumulated over one round trip at frequency f, in units where the
// open-line fundamental sits at 2*pi.
inline double phase_parameter(double f_r, double f_open) {
    detail::check_positive(f_r, "f_r");
    detail::check_positive(f_open, "f_open");
    return two_pi * f_r / f_open;
}

// Fraction of the mode energy stored in the load.
inline double participation(double phi) {
    detail::check_positive(phi, "phi");
    const double s = std::fabs(std::sin(phi));
    return s / (phi + s);
}

// Mode frequency of a line terminated by a fixed reactance x (no frequency
// dependence of the load): f = (atan(z0/x)/pi + n) * f_open.
inline double mode_frequency_from_reactance(double x, double z0, double f_open, int mode_n) {
    detail::check_positive(z0, "z0");
    detail::check_positive(f_open, "f_open");
    detail::check_finite(x, "reactance");
    if (x == 0.0) throw domain_error("terminating reactance must be nonzero");
    if (mode_n < 0) throw unphysical_mode_error("mode index must be non-negative");
    const double f = (std::atan(z0 / x) / pi + mode_n) * f_open;
    if (!(f > 0.0))
        throw unphysical_mode_error("mode index too low for a capacitive termination");
    return f;
}

// Inverse of the mode condition: the terminating reactance implied by a
// measured resonance on mode n of a line with open-end fundamental f_open.
inline double reactance_from_frequencies(double f_r, double f_open, int mode_n, double z0) {
    detail::check_positive(f_r, "f_r");
    detail::check_positive(f_open, "f_open");
    detail::check_positive(z0, "z0");
    if (mode_n < 0) throw unphysical_mode_error("mode index must be non-negative");
    const double u = pi * (f_r / f_open - mode_n);
    if (std::fabs(u) >= pi / 2.0)
        throw domain_error("f_r lies outside the half-octave branch of mode n");
    if (std::fabs(u) < 1e-7)
        throw singular_error("f_r indistinguishable from the open-line mode; reactance diverges");
    if (std::fabs(u) > pi / 2.0 - 1e-7)
        throw singular_error("f_r too close to the branch edge; reactance collapses to a short");
    return z0 / std::tan(u);
}

struct ResonanceSolution {
    int mode_n = 0;
    double f_r = 0.0;
    double phase = 0.0;          // 2*pi*f_r/f_open
    double participation = 0.0;
    double reactance_at_resonance = 0.0;
    double residual = 0.0;       // self-consistency defect, relative to f_open
    LineSpec line{};
    LoadModel load{};
    std::vector<std::string> warnings{};
};

// Self-consistent resonance of mode n with a frequency-dependent load. The
// fixed point f = (atan(z0/X(f))/pi + n) * f_open is bracketed on the
// capacitive branch ((n-1/2) f_open, n f_open) or the inductive branch
// (n f_open, (n+1/2) f_open); composite loads are searched capacitive side
// first, restricted to the sub-interval where X keeps one sign.
inline ResonanceSolution solve_resonance(const LineSpec& line, const LoadModel& load, int mode_n,
                                         double low_f_guard_fraction = 0.01) {
    line.validate();
    load.validate();
    if (mode_n < 0) throw unphysical_mode_error("mode index must be non-negative");
    if (!(low_f_guard_fraction >= 0.0 && low_f_guard_fraction < 0.5))
        throw domain_error("low_f_guard_fraction must lie in [0, 0.5)");

    const double f_open = line.f_open;
    const double z0 = line.z0;
    auto x_of = [&](double f) { return reactance(load, f); };
    auto target = [&](double f) {
        return (std::atan(z0 / x_of(f)) / pi + mode_n) * f_open;
    };
    auto defect = [&](double f) { return f - target(f); };

    struct Candidate {
        double lo, hi;
        bool capacitive;
    };
    std::vector<Candidate> candidates;
    if (mode_n >= 1)
        candidates.push_back({(mode_n - 0.5) * f_open, mode_n * f_open, true});
    candidates.push_back({mode_n * f_open, (mode_n + 0.5) * f_open, false});

    const double inset = 1e-12 * f_open;
    for (const auto& cand : candidates) {
        double lo = cand.lo + inset;
        double hi = cand.hi - inset;
        if (cand.capacitive) {
            if (!(x_of(lo) < 0.0)) continue; // branch starts inductive, no capacitive root
            if (x_of(hi) >= 0.0) {
                // load passes through its own series resonance inside the branch
                const double f_x = detail::solve_bracketed(x_of, lo, hi, 1e-14);
                hi = f_x * (1.0 - 1e-11);
                if (!(hi > lo) || !(x_of(hi) < 0.0)) continue;
            }
        } else {
            if (mode_n == 0) lo = std::max(lo, 1e-9 * f_open);
            if (!(x_of(hi) > 0.0)) continue;
            if (x_of(lo) <= 0.0) {
                const double f_x = detail::solve_bracketed(x_of, lo, hi, 1e-14);
                lo = f_x * (1.0 + 1e-11);
                if (!(hi > lo) || !(x_of(lo) > 0.0)) continue;
            }
        }
        const double d_lo = defect(lo);
        const double d_hi = defect(hi);
        if (d_lo == 0.0 || d_hi == 0.0 || (d_lo < 0.0) != (d_hi < 0.0)) {
            const double f_r = (d_lo == 0.0)   ? lo
                               : (d_hi == 0.0) ? hi
                                               : detail::solve_bracketed(defect, lo, hi, 1e-15, 300);
            ResonanceSolution sol;
            sol.mode_n = mode_n;
            sol.f_r = f_r;
            sol.phase = phase_parameter(f_r, f_open);
            sol.participation = participation(sol.phase);
            sol.reactance_at_resonance = x_of(f_r);
            sol.residual = defect(f_r) / f_open;
            sol.line = line;
            sol.load = load;
            if (std::fabs(sol.residual) > 1e-10)
                throw numerical_error("resonance solve failed to converge");
            if (!cand.capacitive && mode_n == 0 && f_r < low_f_guard_fraction * f_open)
                sol.warnings.push_back(
                    "fundamental inductive resonance falls far below the open-line mode; "
                    "such a mode is rarely accessible in practice");
            for (auto& w : load.warnings()) sol.warnings.push_back(w);
            return sol;
        }
    }
    throw unphysical_mode_error("the requested mode has no resonance with this load");
}

struct EnergyBreakdown {
    double w_res_electric = 0.0;
    double w_res_magnetic = 0.0;
    double w_dut = 0.0;
    double participation = 0.0;
};

// Time-averaged energy split between the line (electric/magnetic) and the
// load, normalized so the line energies sum to 2. The sign of sin(phi)
// selects the branch automatically.
inline EnergyBreakdown stored_energies(double phi) {
    detail::check_positive(phi, "phi");
    const double s = std::sin(phi);
    EnergyBreakdown e;
    e.w_res_electric = 1.0 + s / phi;
    e.w_res_magnetic = 1.0 - s / phi;
    e.w_dut = 2.0 * std::fabs(s) / phi;
    e.participation = e.w_dut / (e.w_res_electric + e.w_res_magnetic + e.w_dut);
    return e;
}

inline EnergyBreakdown stored_energies(const ResonanceSolution& sol) {
    return stored_energies(sol.phase);
}

struct StandingWaveProfile {
    std::vector<double> position;    // z/l, -1 at the load, 0 at the open port
    std::vector<complex> voltage;    // unit forward-wave amplitude
    std::vector<complex> current_z0; // current scaled by z0, same units as voltage
};

// Voltage and current pattern along the line at the resonance frequency,
// referred to the open measurement port.
inline StandingWaveProfile standing_wave(const ResonanceSolution& sol, int num_points) {
    if (num_points < 2) throw domain_error("standing wave needs at least two points");
    const double beta_l = pi * sol.f_r / sol.line.f_open;
    const complex gamma_l =
        reflection_coefficient(load_impedance(sol.load, sol.f_r), sol.line.z0);
    const complex back = gamma_l * std::exp(complex{0.0, -2.0 * beta_l});
    StandingWaveProfile p;
    p.position.reserve(num_points);
    p.voltage.reserve(num_points);
    p.current_z0.reserve(num_points);
    for (int i = 0; i < num_points; ++i) {
        const double zt = -1.0 + static_cast<double>(i) / (num_points - 1);
        const complex fwd = std::exp(complex{0.0, beta_l * zt});
        const complex bwd = back * std::exp(complex{0.0, -beta_l * zt});
        p.position.push_back(zt);
        p.voltage.push_back(fwd + bwd);
        p.current_z0.push_back(bwd - fwd);
    }
    return p;
}

struct ParticipationExtremum {
    double phi = 0.0;
    double participation = 0.0;
    bool attained = false;
};

// Stationary point of the participation along one branch: tan(phi) = phi.
// The fundamental inductive branch has no interior maximum; its supremum 1/2
// sits at phi -> 0 and is reported with attained = false.
inline ParticipationExtremum max_participation_point(LoadKind kind, int mode_n) {
    if (kind == LoadKind::series_composite)
        throw domain_error("pick the capacitive or inductive branch explicitly");
    if (mode_n < 0) throw unphysical_mode_error("mode index must be non-negative");
    if (kind == LoadKind::capacitor && mode_n == 0)
        throw unphysical_mode_error("capacitive branch starts at mode 1");
    if (kind == LoadKind::inductor && mode_n == 0)
        return ParticipationExtremum{0.0, 0.5, false};
    auto g = [](double phi) { return phi * std::cos(phi) - std::sin(phi); };
    const double lo = kind == LoadKind::capacitor ? (2 * mode_n - 1) * pi : 2 * mode_n * pi;
    const double hi = lo + pi / 2.0;
    const double phi = detail::solve_bracketed(g, lo + 1e-9, hi - 1e-9, 1e-15, 300);
    return ParticipationExtremum{phi, participation(phi), true};
}

struct DesignPoint {
    LoadModel load{};
    double f_r = 0.0;
    double participation = 0.0;
};

struct DesignReport {
    DesignPoint exact{};         // stationary point of the participation
    DesignPoint rule_of_thumb{}; // |X| = z0 a quarter of the way below/above the mode
};

// Load value that maximizes the participation on a given branch and mode,
// together with the simpler |X(f_r)| = z0 design it is usually compared to.
inline DesignReport design_load_for_max_p(const LineSpec& line, LoadKind kind, int mode_n) {
    line.validate();
    const ParticipationExtremum ext = max_participation_point(kind, mode_n);
    if (!ext.attained)
        throw domain_error("participation has no attained maximum on this branch");
    const bool cap = kind == LoadKind::capacitor;

    DesignReport rep;
    {
        const double f_r = ext.phi * line.f_open / two_pi;
        const double u = ext.phi / 2.0 - mode_n * pi; // atan(z0/X) at resonance
        const double x = line.z0 / std::tan(u);
        rep.exact.load = cap ? LoadModel::capacitor(capacitance_from_reactance(x, f_r))
                             : LoadModel::inductor(inductance_from_reactance(x, f_r));
        rep.exact.f_r = f_r;
        rep.exact.participation = ext.participation;
    }
    {
        const double f_r = (cap ? mode_n - 0.25 : mode_n + 0.25) * line.f_open;
        const double x = cap ? -line.z0 : line.z0;
        rep.rule_of_thumb.load = cap ? LoadModel::capacitor(capacitance_from_reactance(x, f_r))
                                     : LoadModel::inductor(inductance_from_reactance(x, f_r));
        rep.rule_of_thumb.f_r = f_r;
        rep.rule_of_thumb.participation = participation(phase_parameter(f_r, line.f_open));
    }
    return rep;
}

} // namespace tlres
