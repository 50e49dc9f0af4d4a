#pragma once
// Internal quality factor of a loaded-line mode: the load's dielectric loss
// weighted by its energy participation plus the line's own attenuation, and
// the inverse problem of extracting the loss tangent from a measured Q.

#include <cmath>

#include "core.hpp"
#include "resonance.hpp"
#include "txline.hpp"

namespace tlres {

struct LossBreakdown {
    double phi = 0.0;
    double participation = 0.0;
    double q_dut_inv = 0.0; // load contribution to 1/Q_i
    double q_res_inv = 0.0; // line contribution to 1/Q_i
    double q_i_inv = 0.0;
};

// Forward loss budget at phase parameter phi. The line attenuation scales as
// (f/f_open)^s, which in phase units is (phi/2pi)^s.
inline LossBreakdown qi_forward(double phi, double tan_delta, const AttenuationModel& atten) {
    detail::check_positive(phi, "phi");
    if (std::isnan(tan_delta) || tan_delta < 0.0)
        throw domain_error("tan_delta must be non-negative");
    atten.validate();
    const double s_abs = std::fabs(std::sin(phi));
    LossBreakdown b;
    b.phi = phi;
    b.participation = s_abs / (phi + s_abs);
    b.q_dut_inv = 2.0 * b.participation * tan_delta;
    const double q0_inv = std::isinf(atten.q_open_ref) ? 0.0 : 1.0 / atten.q_open_ref;
    b.q_res_inv =
        (1.0 - b.participation) * std::pow(phi / two_pi, atten.exponent_s - 1.0) * q0_inv;
    b.q_i_inv = b.q_dut_inv + b.q_res_inv;
    return b;
}

struct SingleModeTanDelta {
    double tan_delta = 0.0;
    bool negative = false; // the line budget already exceeds the measured loss
};

// Exact inversion of the forward budget for one mode: subtract the line's
// share from the measured 1/Q_i and divide by twice the participation.
inline SingleModeTanDelta tan_delta_single_mode(double q_i, double q_open_ref, double phi,
                                                double exponent_s = 1.0) {
    detail::check_positive(q_i, "q_i");
    detail::check_positive(phi, "phi");
    if (std::isnan(q_open_ref) || q_open_ref <= 0.0)
        throw domain_error("q_open_ref must be positive (may be infinite)");
    detail::check_finite(exponent_s, "exponent_s");
    const double s_abs = std::fabs(std::sin(phi));
    const double p = s_abs / (phi + s_abs);
    if (p < 1e-12)
        throw domain_error("participation vanishes at this phase; tan_delta is unconstrained");
    const double q0_inv = std::isinf(q_open_ref) ? 0.0 : 1.0 / q_open_ref;
    const double line_share = (1.0 - p) * std::pow(phi / two_pi, exponent_s - 1.0) * q0_inv;
    SingleModeTanDelta r;
    r.tan_delta = (1.0 / q_i - line_share) / (2.0 * p);
    r.negative = r.tan_delta < 0.0;
    return r;
}

struct PerturbativeReport {
    double q_i_inv_exact = 0.0;
    double q_i_inv_perturbative = 0.0;
    double relative_deviation = 0.0; // (exact - perturbative) / exact
};

// First-order expansion of 1/Q_i about the nearest open-line harmonic
// phi = n*pi, valid only while the load barely detunes the mode. Comparing it
// with the exact budget shows where the small-detuning picture breaks down.
inline PerturbativeReport perturbative_limits(double phi, double tan_delta,
                                              const AttenuationModel& atten) {
    detail::check_positive(phi, "phi");
    if (phi <= pi / 2.0)
        throw domain_error("no open-line harmonic to expand about below phi = pi/2");
    const int n = static_cast<int>(std::lround(phi / pi));
    if (n < 1) throw domain_error("nearest harmonic index must be positive");
    const double cap_p = n * pi;
    const double eps = phi - cap_p;
    const double u = std::fabs(eps);
    const double q0_inv = std::isinf(atten.q_open_ref) ? 0.0 : 1.0 / atten.q_open_ref;
    const double a = two_pi * q0_inv * std::pow(0.5 * n, atten.exponent_s);
    PerturbativeReport rep;
    rep.q_i_inv_exact = qi_forward(phi, tan_delta, atten).q_i_inv;
    rep.q_i_inv_perturbative = a / cap_p + u * (2.0 * tan_delta - a / cap_p) / cap_p +
                               eps * a * (atten.exponent_s - 1.0) / (cap_p * cap_p);
    rep.relative_deviation = rep.q_i_inv_exact == 0.0
                                 ? 0.0
                                 : (rep.q_i_inv_exact - rep.q_i_inv_perturbative) /
                                       rep.q_i_inv_exact;
    return rep;
}

} // namespace tlres
