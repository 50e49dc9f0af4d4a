#pragma once
// Transmission-line segment and reactive termination models: reactances,
// impedances, and reflection coefficients of the loaded end.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "core.hpp"

namespace tlres {

enum class LoadKind { capacitor, inductor, series_composite };

inline const char* to_string(LoadKind k) {
    switch (k) {
        case LoadKind::capacitor: return "capacitor";
        case LoadKind::inductor: return "inductor";
        case LoadKind::series_composite: return "series_composite";
    }
    return "unknown";
}

// Conductor/dielectric loss of the line itself, summarized by the quality
// factor its open-ended resonance would have at the reference frequency and a
// power law for how the attenuation scales with frequency.
struct AttenuationModel {
    double q_open_ref = infinity; // lossless line by default
    double exponent_s = 1.0;

    void validate() const {
        if (std::isnan(q_open_ref) || q_open_ref <= 0.0)
            throw domain_error("q_open_ref must be positive (may be infinite)");
        detail::check_finite(exponent_s, "exponent_s");
    }
};

struct LineSpec {
    double z0 = 50.0;     // characteristic impedance, ohm
    double f_open = 0.0;  // fundamental resonance of the line with both ends open, Hz
    AttenuationModel attenuation{};

    void validate() const {
        detail::check_positive(z0, "z0");
        detail::check_positive(f_open, "f_open");
        attenuation.validate();
    }
};

struct LoadElement {
    LoadKind kind = LoadKind::capacitor;
    double value = 0.0; // farad or henry
};

// Termination at the far end of the line: a single element or a series chain,
// with dielectric loss expressed as a loss tangent of the net reactance.
struct LoadModel {
    LoadKind kind = LoadKind::capacitor;
    double value = 0.0;      // farad or henry; unused for series_composite
    double tan_delta = 0.0;
    std::vector<LoadElement> elements{}; // series_composite only

    static LoadModel capacitor(double farad, double tan_delta = 0.0) {
        return LoadModel{LoadKind::capacitor, farad, tan_delta, {}};
    }
    static LoadModel inductor(double henry, double tan_delta = 0.0) {
        return LoadModel{LoadKind::inductor, henry, tan_delta, {}};
    }
    static LoadModel series(std::vector<LoadElement> parts, double tan_delta = 0.0) {
        return LoadModel{LoadKind::series_composite, 0.0, tan_delta, std::move(parts)};
    }

    void validate() const {
        if (std::isnan(tan_delta) || std::isinf(tan_delta) || tan_delta < 0.0)
            throw domain_error("tan_delta must be finite and non-negative");
        if (kind == LoadKind::series_composite) {
            if (elements.empty())
                throw domain_error("series_composite load needs at least one element");
            for (const auto& e : elements) {
                if (e.kind == LoadKind::series_composite)
                    throw domain_error("series_composite elements cannot nest");
                detail::check_positive(e.value, "series element value");
            }
        } else {
            detail::check_positive(value, "load value");
        }
    }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (tan_delta > 0.1)
            w.push_back("tan_delta exceeds 0.1; first-order loss formulas degrade");
        return w;
    }
};

// Reactance of the load at frequency f. Negative for net-capacitive loads,
// positive for net-inductive ones.
inline double reactance(const LoadModel& load, double f) {
    detail::check_positive(f, "frequency");
    const double w = two_pi * f;
    auto one = [w](LoadKind k, double v) {
        return k == LoadKind::capacitor ? -1.0 / (w * v) : w * v;
    };
    if (load.kind == LoadKind::series_composite) {
        double x = 0.0;
        for (const auto& e : load.elements) x += one(e.kind, e.value);
        return x;
    }
    return one(load.kind, load.value);
}

// Complex impedance of the load including its dielectric loss: the real part
// is |X| * tan_delta of the net reactance.
inline complex load_impedance(const LoadModel& load, double f) {
    const double x = reactance(load, f);
    return complex{std::fabs(x) * load.tan_delta, x};
}

// Exact reflection coefficient of impedance z terminating a line of
// characteristic impedance z0.
inline complex reflection_coefficient(complex z, double z0) {
    detail::check_positive(z0, "z0");
    const complex den = z + z0;
    if (std::abs(den) < 1e-12 * z0)
        throw singular_error("load impedance too close to -z0 for a reflection coefficient");
    return (z - z0) / den;
}

// Phase of the reflection off a purely reactive termination jx. Lies in
// (0, pi) for inductive x, in (-pi, 0) for capacitive x, and is -pi at x = 0.
inline double reflection_phase(double x, double z0) {
    detail::check_positive(z0, "z0");
    detail::check_finite(x, "reactance");
    if (x == 0.0) return -pi;
    return 2.0 * std::atan(z0 / x);
}

// First-order magnitude of the reflection off a slightly lossy reactance:
// 1 - |sin(theta)| * tan_delta with sin(theta) = 2 z0 x / (x^2 + z0^2).
inline double reflection_magnitude(double x, double z0, double tan_delta) {
    detail::check_positive(z0, "z0");
    detail::check_finite(x, "reactance");
    if (std::isnan(tan_delta) || tan_delta < 0.0)
        throw domain_error("tan_delta must be non-negative");
    const double sin_theta = 2.0 * z0 * x / (x * x + z0 * z0);
    return 1.0 - std::fabs(sin_theta) * tan_delta;
}

inline double capacitance_from_reactance(double x, double f) {
    detail::check_positive(f, "frequency");
    if (!(x < 0.0)) throw domain_error("capacitive reactance must be negative");
    return -1.0 / (two_pi * f * x);
}

inline double inductance_from_reactance(double x, double f) {
    detail::check_positive(f, "frequency");
    if (!(x > 0.0)) throw domain_error("inductive reactance must be positive");
    return x / (two_pi * f);
}

} // namespace tlres
