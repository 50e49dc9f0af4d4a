#pragma once
// Self-calibration from several modes of one resonator: the open-line
// fundamental and the load element value from mode frequencies, the loss
// tangent and line quality from mode Q factors, and a cross-check of the
// load topology against parasitic alternatives.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "detail/linalg.hpp"
#include "detail/rootfind.hpp"
#include "loss.hpp"
#include "resonance.hpp"
#include "txline.hpp"

namespace tlres {

struct ModeMeasurement {
    int mode_n = 0;
    double f_r = 0.0;
    double q_i = 0.0;     // 0 = not measured
    double sigma_f = 0.0; // absolute, Hz; 0 = unknown
    double sigma_q = 0.0; // absolute; 0 = unknown
};

struct ReactanceCalibration {
    double f_open = 0.0;
    double value = 0.0; // farad or henry
    LoadKind kind = LoadKind::capacitor;
    double z0 = 0.0;
    std::array<std::array<double, 2>, 2> covariance{{{0.0, 0.0}, {0.0, 0.0}}}; // (f_open, value)
    double sigma_f_open = 0.0;
    double sigma_value = 0.0;
    double rms_residual = 0.0; // relative frequency defect over the modes
    std::vector<double> mode_reactances{};
    std::vector<double> participations{};
};

namespace detail {

inline void check_mode_list(const std::vector<ModeMeasurement>& modes, LoadKind kind) {
    if (kind == LoadKind::series_composite)
        throw domain_error("calibration supports single-element load hypotheses");
    if (modes.size() < 2) throw domain_error("calibration needs at least two modes");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        check_positive(modes[i].f_r, "mode frequency");
        if (modes[i].mode_n < 0) throw unphysical_mode_error("mode index must be non-negative");
        if (kind == LoadKind::capacitor && modes[i].mode_n < 1)
            throw unphysical_mode_error("capacitive branch starts at mode 1");
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if (modes[i].mode_n == modes[j].mode_n)
                throw domain_error("duplicate mode index in calibration input");
    }
}

} // namespace detail

// Joint fit of (f_open, element value) to two or more mode frequencies. Two
// modes are solved exactly; more are reconciled by least squares with the
// open-line fundamental eliminated in closed form.
inline ReactanceCalibration calibrate_reactance(const std::vector<ModeMeasurement>& modes,
                                                double z0, LoadKind kind) {
    detail::check_positive(z0, "z0");
    detail::check_mode_list(modes, kind);
    const bool cap = kind == LoadKind::capacitor;

    auto x_at = [&](double v, double f) {
        return cap ? -1.0 / (two_pi * f * v) : two_pi * f * v;
    };
    auto branch_term = [&](double v, const ModeMeasurement& m) {
        return m.mode_n + std::atan(z0 / x_at(v, m.f_r)) / pi;
    };

    // start from the |X| = z0 rule of thumb at the first mode
    const double v0 = cap ? 1.0 / (two_pi * modes[0].f_r * z0) : z0 / (two_pi * modes[0].f_r);
    const double u_lo = std::log(v0 * 1e-3);
    const double u_hi = std::log(v0 * 1e3);

    bool weighted = true;
    for (const auto& m : modes)
        if (!(m.sigma_f > 0.0)) weighted = false;

    double value = 0.0;
    double f_open = 0.0;
    if (modes.size() == 2) {
        auto gap = [&](double u) {
            const double v = std::exp(u);
            return modes[0].f_r / branch_term(v, modes[0]) -
                   modes[1].f_r / branch_term(v, modes[1]);
        };
        if ((gap(u_lo) < 0.0) == (gap(u_hi) < 0.0) && gap(u_lo) != 0.0 && gap(u_hi) != 0.0)
            throw kind_mismatch_error(
                "no single element of this kind reconciles the two modes");
        const double u = detail::solve_bracketed(gap, u_lo, u_hi, 1e-14, 300);
        value = std::exp(u);
        f_open = modes[0].f_r / branch_term(value, modes[0]);
    } else {
        auto projected_f_open = [&](double v) {
            double num = 0.0, den = 0.0;
            for (const auto& m : modes) {
                const double w = weighted ? 1.0 / (m.sigma_f * m.sigma_f) : 1.0;
                const double b = branch_term(v, m);
                num += w * m.f_r * b;
                den += w * b * b;
            }
            return num / den;
        };
        auto chi2 = [&](double u) {
            const double v = std::exp(u);
            const double fo = projected_f_open(v);
            double acc = 0.0;
            for (const auto& m : modes) {
                const double w = weighted ? 1.0 / (m.sigma_f * m.sigma_f) : 1.0;
                const double r = m.f_r - fo * branch_term(v, m);
                acc += w * r * r;
            }
            return acc;
        };
        const double u = detail::minimize_golden(chi2, u_lo, u_hi, 1e-13, 400);
        value = std::exp(u);
        f_open = projected_f_open(value);
        if (!(f_open > 0.0)) throw kind_mismatch_error("mode set rejects this load kind");
    }

    ReactanceCalibration cal;
    cal.f_open = f_open;
    cal.value = value;
    cal.kind = kind;
    cal.z0 = z0;

    double res2 = 0.0;
    detail::Mat2 m2{};
    for (const auto& m : modes) {
        const double x = x_at(value, m.f_r);
        const double b = branch_term(value, m);
        const double model_f = f_open * b;
        const double rel = (m.f_r - model_f) / m.f_r;
        res2 += rel * rel;
        cal.mode_reactances.push_back(x);
        cal.participations.push_back(participation(phase_parameter(m.f_r, f_open)));
        if (weighted) {
            // sensitivity of the model frequency to (ln f_open, ln value);
            // the log parameters keep the normal matrix well scaled
            const double da_dx = -z0 / (pi * (x * x + z0 * z0));
            const double j0 = model_f;
            const double j1 = f_open * da_dx * std::fabs(x);
            const double w = 1.0 / (m.sigma_f * m.sigma_f);
            m2.a11 += w * j0 * j0;
            m2.a12 += w * j0 * j1;
            m2.a21 += w * j1 * j0;
            m2.a22 += w * j1 * j1;
        }
    }
    cal.rms_residual = std::sqrt(res2 / modes.size());
    if (weighted) {
        const detail::Mat2 cov = m2.inverse(); // covariance of (ln f_open, ln value)
        cal.covariance = {{{cov.a11 * f_open * f_open, cov.a12 * f_open * value},
                           {cov.a21 * f_open * value, cov.a22 * value * value}}};
        cal.sigma_f_open = f_open * std::sqrt(std::max(0.0, cov.a11));
        cal.sigma_value = value * std::sqrt(std::max(0.0, cov.a22));
    }
    return cal;
}

struct LossCalibration {
    double tan_delta = 0.0;
    double q_open_ref = 0.0;
    double exponent_s = 1.0;
    double sigma_tan_delta = 0.0;
    double sigma_q_open_ref = 0.0;
    double condition_number = 0.0;
    std::vector<std::string> warnings{};
};

// Split the measured mode losses into a load loss tangent and the line's
// reference quality: each mode contributes one linear equation
// 2|sin(phi)| * tan_delta + 2pi (phi/2pi)^s / q0 = (phi + |sin(phi)|) / Q_i.
inline LossCalibration calibrate_loss(const std::vector<ModeMeasurement>& modes, double f_open,
                                      double exponent_s = 1.0) {
    detail::check_positive(f_open, "f_open");
    detail::check_finite(exponent_s, "exponent_s");
    std::vector<const ModeMeasurement*> usable;
    for (const auto& m : modes)
        if (m.q_i > 0.0) usable.push_back(&m);
    if (usable.size() < 2)
        throw domain_error("loss calibration needs at least two modes with measured Q");

    bool weighted = true;
    for (const auto* m : usable)
        if (!(m->sigma_q > 0.0)) weighted = false;

    detail::Mat2 ata{};
    double b1 = 0.0, b2 = 0.0;
    for (const auto* m : usable) {
        const double phi = phase_parameter(m->f_r, f_open);
        const double s_abs = std::fabs(std::sin(phi));
        const double a0 = 2.0 * s_abs;
        const double a1 = two_pi * std::pow(phi / two_pi, exponent_s);
        const double rhs = (phi + s_abs) / m->q_i;
        // sigma of the rhs from the sigma of Q
        const double sr = weighted ? (phi + s_abs) * m->sigma_q / (m->q_i * m->q_i) : 1.0;
        const double w = 1.0 / (sr * sr);
        ata.a11 += w * a0 * a0;
        ata.a12 += w * a0 * a1;
        ata.a21 += w * a1 * a0;
        ata.a22 += w * a1 * a1;
        b1 += w * a0 * rhs;
        b2 += w * a1 * rhs;
    }

    LossCalibration cal;
    cal.exponent_s = exponent_s;
    cal.condition_number = ata.condition_number();
    const detail::Vec2 sol = detail::solve2(ata, b1, b2);
    cal.tan_delta = sol.x1;
    const double q0_inv = sol.x2;
    cal.q_open_ref = q0_inv != 0.0 ? 1.0 / q0_inv : infinity;
    if (weighted) {
        const detail::Mat2 cov = ata.inverse();
        cal.sigma_tan_delta = std::sqrt(std::max(0.0, cov.a11));
        const double sigma_q0_inv = std::sqrt(std::max(0.0, cov.a22));
        cal.sigma_q_open_ref = sigma_q0_inv * cal.q_open_ref * cal.q_open_ref;
    }
    double loss_scale = 0.0;
    for (const auto* m : usable) loss_scale = std::max(loss_scale, 1.0 / m->q_i);
    if (cal.tan_delta < -1e-9 * loss_scale)
        cal.warnings.push_back("calibrated tan_delta is negative; loss model is inconsistent");
    if (q0_inv < -1e-9 * loss_scale)
        cal.warnings.push_back("calibrated line loss is negative; loss model is inconsistent");
    if (cal.condition_number > 1e6)
        cal.warnings.push_back("loss system is ill-conditioned; modes sample the budget poorly");
    return cal;
}

struct ParasiticsModelFit {
    LoadKind kind = LoadKind::capacitor;
    LoadModel load{};
    double rms_rel_residual = infinity;
    bool physical = false;
};

struct ParasiticsReport {
    std::vector<double> frequencies{};
    std::vector<double> reactances{};
    ParasiticsModelFit capacitor_fit{};
    ParasiticsModelFit inductor_fit{};
    ParasiticsModelFit series_fit{};
    std::string preferred{};
};

// Check which lumped topology explains the per-mode reactances implied by the
// measured frequencies: a single element, or a series pair that would signal
// lead parasitics. A single element is preferred when it fits essentially as
// well as the two-parameter alternative.
inline ParasiticsReport discriminate_parasitics(const std::vector<ModeMeasurement>& modes,
                                                double f_open, double z0) {
    detail::check_positive(f_open, "f_open");
    detail::check_positive(z0, "z0");
    if (modes.size() < 2)
        throw domain_error("parasitics discrimination needs at least two modes");

    ParasiticsReport rep;
    for (const auto& m : modes) {
        detail::check_positive(m.f_r, "mode frequency");
        rep.frequencies.push_back(m.f_r);
        rep.reactances.push_back(reactance_from_frequencies(m.f_r, f_open, m.mode_n, z0));
    }
    const std::size_t n = rep.frequencies.size();

    auto score = [&](const LoadModel& load) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double rel =
                (reactance(load, rep.frequencies[k]) - rep.reactances[k]) / rep.reactances[k];
            acc += rel * rel;
        }
        return std::sqrt(acc / n);
    };

    { // single capacitor: least squares on X = -1/(w C) in the parameter 1/C
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double g = -1.0 / (two_pi * rep.frequencies[k]);
            num += g * rep.reactances[k];
            den += g * g;
        }
        const double inv_c = num / den;
        rep.capacitor_fit.kind = LoadKind::capacitor;
        if (inv_c > 0.0) {
            rep.capacitor_fit.load = LoadModel::capacitor(1.0 / inv_c);
            rep.capacitor_fit.physical = true;
            rep.capacitor_fit.rms_rel_residual = score(rep.capacitor_fit.load);
        }
    }
    { // single inductor: least squares on X = w L
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double g = two_pi * rep.frequencies[k];
            num += g * rep.reactances[k];
            den += g * g;
        }
        const double l = num / den;
        rep.inductor_fit.kind = LoadKind::inductor;
        if (l > 0.0) {
            rep.inductor_fit.load = LoadModel::inductor(l);
            rep.inductor_fit.physical = true;
            rep.inductor_fit.rms_rel_residual = score(rep.inductor_fit.load);
        }
    }
    rep.series_fit.kind = LoadKind::series_composite;
    if (n >= 3) { // series LC: X = w L - (1/C)/w, linear in (L, 1/C)
        // equilibrate with the geometric mean frequency so both columns are O(X)
        double log_acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) log_acc += std::log(rep.frequencies[k]);
        const double w_ref = two_pi * std::exp(log_acc / n);
        detail::Mat2 ata{};
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = two_pi * rep.frequencies[k];
            const double g0 = w / w_ref, g1 = -w_ref / w; // unknowns (L w_ref, 1/(C w_ref))
            ata.a11 += g0 * g0;
            ata.a12 += g0 * g1;
            ata.a21 += g1 * g0;
            ata.a22 += g1 * g1;
            b1 += g0 * rep.reactances[k];
            b2 += g1 * rep.reactances[k];
        }
        try {
            const detail::Vec2 sol = detail::solve2(ata, b1, b2);
            const double l = sol.x1 / w_ref;
            const double inv_c = sol.x2 * w_ref;
            if (l > 0.0 && inv_c > 0.0) {
                rep.series_fit.load = LoadModel::series(
                    {{LoadKind::inductor, l}, {LoadKind::capacitor, 1.0 / inv_c}});
                rep.series_fit.physical = true;
                rep.series_fit.rms_rel_residual = score(rep.series_fit.load);
            }
        } catch (const singular_error&) {
            // leave the series fit marked unphysical
        }
    }

    const ParasiticsModelFit& best_single = rep.capacitor_fit.rms_rel_residual <=
                                                    rep.inductor_fit.rms_rel_residual
                                                ? rep.capacitor_fit
                                                : rep.inductor_fit;
    if (best_single.physical &&
        (!rep.series_fit.physical ||
         best_single.rms_rel_residual <= std::max(3.0 * rep.series_fit.rms_rel_residual, 1e-9)))
        rep.preferred = to_string(best_single.kind);
    else if (rep.series_fit.physical)
        rep.preferred = to_string(LoadKind::series_composite);
    else
        rep.preferred = "unexplained";
    return rep;
}

} // namespace tlres
