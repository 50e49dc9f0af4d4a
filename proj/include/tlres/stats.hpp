#pragma once
// Uncertainty analysis for extracted load parameters: first-order propagation
// formulas, seeded Monte Carlo checks of those formulas, log-normal statistics
// for reference-resonator ensembles, and a weighted dielectric-constant fit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "core.hpp"
#include "detail/rng.hpp"
#include "loss.hpp"
#include "resonance.hpp"
#include "txline.hpp"

namespace tlres {

// First-order relative uncertainty of an extracted C or L when the reference
// frequency carries relative uncertainty rel_sigma_f_open. The lever arm
// (1 - p)/p is what rewards high-participation operating points.
inline double reactance_value_uncertainty(double participation, double rel_sigma_f_open) {
    detail::check_finite(participation, "participation");
    if (rel_sigma_f_open < 0.0 || !std::isfinite(rel_sigma_f_open))
        throw domain_error("rel_sigma_f_open must be non-negative and finite");
    if (participation <= 0.0 || participation >= 1.0)
        throw domain_error(
            "participation must lie in (0, 1); the uncertainty diverges as it vanishes");
    return (1.0 - participation) / participation * rel_sigma_f_open;
}

struct TanDeltaUncertainty {
    double rel_sigma = 0.0;   // magnitude of the first-order relative sigma
    double denominator = 0.0; // q_open/q_i - (1 - p), the formula's pole term
    bool divergent = false;   // denominator negative or near zero
};

// First-order relative uncertainty of a single-mode loss tangent when the
// reference quality factor carries relative uncertainty rel_sigma_q_open.
// q_open must be referred to the mode frequency; for a frequency-proportional
// attenuation (exponent one) it equals the reference value itself.
inline TanDeltaUncertainty tan_delta_uncertainty(double participation, double q_open, double q_i,
                                                 double rel_sigma_q_open) {
    if (participation <= 0.0 || participation >= 1.0)
        throw domain_error("participation must lie in (0, 1)");
    detail::check_positive(q_open, "q_open");
    detail::check_positive(q_i, "q_i");
    if (rel_sigma_q_open < 0.0 || !std::isfinite(rel_sigma_q_open))
        throw domain_error("rel_sigma_q_open must be non-negative and finite");
    TanDeltaUncertainty u;
    u.denominator = q_open / q_i - (1.0 - participation);
    if (u.denominator == 0.0)
        throw singular_error(
            "uncertainty diverges: the line budget exactly accounts for the measured loss");
    // Negative or small denominator means the extracted loss tangent is near
    // zero or negative and the linearised picture has broken down.
    u.divergent = u.denominator < 0.1;
    u.rel_sigma = std::fabs((1.0 - participation) / u.denominator) * rel_sigma_q_open;
    return u;
}

struct UncertaintyReport {
    double analytic_relative_sigma = 0.0;
    double monte_carlo_relative_sigma = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double nominal_value = 0.0; // extraction chain evaluated at the unperturbed input
    double sample_mean = 0.0;
    bool divergent = false;     // the first-order formula is unreliable here
};

namespace detail {

// Single-element extraction from a measured (f_r, mode) pair and an assumed
// reference frequency. The capacitive form passes smoothly through zero where
// the frequency ratio crosses the harmonic, so noisy reference samples never
// hit a pole on that side.
inline double extract_element_value(double f_r, double f_open, int mode_n, double z0,
                                    LoadKind kind) {
    if (!(f_open > 0.0))
        throw numerical_error("a reference-frequency sample fell to zero; sigma too large");
    const double u = f_r / f_open - static_cast<double>(mode_n);
    if (!(u > -0.5 && u < 0.5))
        throw numerical_error("a reference-frequency sample left the mode branch; sigma too large");
    const double w = two_pi * f_r;
    if (kind == LoadKind::capacitor) return -std::tan(pi * u) / (w * z0);
    const double t = std::tan(pi * u);
    if (t == 0.0) throw singular_error("inductance extraction hit the branch pole");
    return z0 / (w * t);
}

struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void push(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double sample_sd() const {
        return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
    }
};

} // namespace detail

// Monte Carlo check of reactance_value_uncertainty: perturb the reference
// frequency with normal noise and re-run the exact extraction per sample.
// Sample k depends only on (seed, k), so the ensemble is reproducible and
// independent of evaluation order.
inline UncertaintyReport value_uncertainty_mc(const ResonanceSolution& sol,
                                              double rel_sigma_f_open, std::uint64_t n_samples,
                                              std::uint64_t seed) {
    if (sol.load.kind == LoadKind::series_composite)
        throw domain_error("composite loads do not define a single-element extraction");
    if (n_samples < 1000) throw domain_error("n_samples must be at least 1000");
    if (rel_sigma_f_open < 0.0 || !std::isfinite(rel_sigma_f_open))
        throw domain_error("rel_sigma_f_open must be non-negative and finite");
    sol.line.validate();
    detail::check_positive(sol.f_r, "f_r");

    UncertaintyReport rep;
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.analytic_relative_sigma = reactance_value_uncertainty(sol.participation, rel_sigma_f_open);
    rep.nominal_value = detail::extract_element_value(sol.f_r, sol.line.f_open, sol.mode_n,
                                                      sol.line.z0, sol.load.kind);
    if (rep.nominal_value == 0.0)
        throw singular_error("nominal extraction is zero; relative sigma undefined");
    detail::RunningMoments m;
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const double z = detail::gaussian_sample(seed, k);
        const double f_open_k = sol.line.f_open * (1.0 + rel_sigma_f_open * z);
        m.push(detail::extract_element_value(sol.f_r, f_open_k, sol.mode_n, sol.line.z0,
                                             sol.load.kind));
    }
    rep.sample_mean = m.mean;
    rep.monte_carlo_relative_sigma = m.sample_sd() / std::fabs(rep.nominal_value);
    return rep;
}

// Monte Carlo check of tan_delta_uncertainty: perturb the reference quality
// factor with log-normal noise (shape parameter equal to the fractional sigma)
// and re-run the exact single-mode inversion per sample.
inline UncertaintyReport tan_delta_uncertainty_mc(double q_i, double phi,
                                                  const AttenuationModel& atten,
                                                  double rel_sigma_q_open,
                                                  std::uint64_t n_samples, std::uint64_t seed) {
    detail::check_positive(q_i, "q_i");
    detail::check_positive(phi, "phi");
    atten.validate();
    if (std::isinf(atten.q_open_ref))
        throw domain_error("q_open_ref must be finite to carry uncertainty");
    if (rel_sigma_q_open < 0.0 || !std::isfinite(rel_sigma_q_open))
        throw domain_error("rel_sigma_q_open must be non-negative and finite");
    if (n_samples < 1000) throw domain_error("n_samples must be at least 1000");

    const double p = participation(phi);
    // Open-line quality factor referred to the mode frequency.
    const double q_open_mode =
        atten.q_open_ref * std::pow(phi / two_pi, 1.0 - atten.exponent_s);
    const TanDeltaUncertainty analytic =
        tan_delta_uncertainty(p, q_open_mode, q_i, rel_sigma_q_open);

    UncertaintyReport rep;
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.analytic_relative_sigma = analytic.rel_sigma;
    rep.divergent = analytic.divergent;
    rep.nominal_value =
        tan_delta_single_mode(q_i, atten.q_open_ref, phi, atten.exponent_s).tan_delta;
    if (rep.nominal_value == 0.0)
        throw singular_error("nominal loss tangent is zero; relative sigma undefined");
    detail::RunningMoments m;
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const double z = detail::gaussian_sample(seed, k);
        const double q0_k = atten.q_open_ref * std::exp(rel_sigma_q_open * z);
        m.push(tan_delta_single_mode(q_i, q0_k, phi, atten.exponent_s).tan_delta);
    }
    rep.sample_mean = m.mean;
    rep.monte_carlo_relative_sigma = m.sample_sd() / std::fabs(rep.nominal_value);
    return rep;
}

struct LogNormalFit {
    double mu = 0.0;    // mean of ln x
    double sigma = 0.0; // maximum-likelihood shape (1/n convention)
    std::size_t n = 0;
    bool degenerate = false; // all samples identical
};

// Maximum-likelihood log-normal fit.
inline LogNormalFit fit_lognormal(const std::vector<double>& samples) {
    if (samples.size() < 3) throw domain_error("fit_lognormal needs at least 3 samples");
    std::vector<double> logs;
    logs.reserve(samples.size());
    for (double x : samples) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw domain_error("fit_lognormal requires positive finite samples");
        logs.push_back(std::log(x));
    }
    LogNormalFit fit;
    fit.n = samples.size();
    double sum = 0.0;
    for (double l : logs) sum += l;
    fit.mu = sum / static_cast<double>(logs.size());
    double ss = 0.0;
    for (double l : logs) ss += (l - fit.mu) * (l - fit.mu);
    fit.sigma = std::sqrt(ss / static_cast<double>(logs.size()));
    fit.degenerate = fit.sigma == 0.0;
    return fit;
}

// Deterministic log-normal ensemble: sample k is exp(mu + sigma * z_k) with
// z_k drawn from (seed, k) alone.
inline std::vector<double> lognormal_samples(double mu, double sigma, std::size_t n,
                                             std::uint64_t seed) {
    detail::check_finite(mu, "mu");
    if (sigma < 0.0 || !std::isfinite(sigma))
        throw domain_error("sigma must be non-negative and finite");
    if (n == 0) throw domain_error("n must be positive");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(std::exp(mu + sigma * detail::gaussian_sample(seed, k)));
    return out;
}

struct TanDeltaDistribution {
    double median = 0.0;
    double iqr_low = 0.0;  // 25th percentile
    double iqr_high = 0.0; // 75th percentile
    double fraction_negative = 0.0;
    std::size_t n = 0;
};

namespace detail {

// Linear-interpolation quantile of an ascending-sorted sample.
inline double quantile_sorted(const std::vector<double>& xs, double q) {
    const double h = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

} // namespace detail

// Pair one measured mode with an ensemble of reference quality factors,
// inverting the loss budget against each, and summarise the resulting
// loss-tangent distribution. Negative extractions are kept: a heavy negative
// tail signals that reference spread dominates the load's own loss.
inline TanDeltaDistribution single_mode_tand_distribution(
    double q_i, double phi, const std::vector<double>& q_open_samples, double exponent_s = 1.0) {
    if (q_open_samples.size() < 3)
        throw domain_error("single_mode_tand_distribution needs at least 3 samples");
    std::vector<double> tds;
    tds.reserve(q_open_samples.size());
    std::size_t negative = 0;
    for (double q0 : q_open_samples) {
        const double td = tan_delta_single_mode(q_i, q0, phi, exponent_s).tan_delta;
        if (td < 0.0) ++negative;
        tds.push_back(td);
    }
    std::sort(tds.begin(), tds.end());
    TanDeltaDistribution d;
    d.n = tds.size();
    d.median = detail::quantile_sorted(tds, 0.50);
    d.iqr_low = detail::quantile_sorted(tds, 0.25);
    d.iqr_high = detail::quantile_sorted(tds, 0.75);
    d.fraction_negative = static_cast<double>(negative) / static_cast<double>(tds.size());
    return d;
}

struct KappaPoint {
    double area_m2 = 0.0;
    double thickness_m = 0.0;
    double capacitance_f = 0.0;
    double area_sigma_fraction = 0.0; // relative uncertainty on the plate area
};

struct KappaFit {
    double kappa = 0.0;
    double sigma_kappa = 0.0;
    std::vector<KappaPoint> points{};
};

// Weighted least-squares slope, constrained through the origin, of measured
// capacitance against the vacuum parallel-plate value eps0 * A / d. Each point
// is weighted by its area-dominated sigma; with more than one point the
// variance is rescaled by the reduced residual so the quoted error reflects
// the observed scatter.
inline KappaFit kappa_fit(const std::vector<KappaPoint>& points) {
    if (points.empty()) throw domain_error("kappa_fit needs at least one point");
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& pt : points) {
        detail::check_positive(pt.area_m2, "area_m2");
        detail::check_positive(pt.thickness_m, "thickness_m");
        detail::check_positive(pt.capacitance_f, "capacitance_f");
        detail::check_positive(pt.area_sigma_fraction, "area_sigma_fraction");
        const double x = vacuum_permittivity * pt.area_m2 / pt.thickness_m;
        const double sig = pt.area_sigma_fraction * pt.capacitance_f;
        sxx += (x / sig) * (x / sig);
        sxy += (x / sig) * (pt.capacitance_f / sig);
    }
    KappaFit fit;
    fit.points = points;
    fit.kappa = sxy / sxx;
    double variance = 1.0 / sxx;
    if (points.size() > 1) {
        double chi2 = 0.0;
        for (const auto& pt : points) {
            const double x = vacuum_permittivity * pt.area_m2 / pt.thickness_m;
            const double sig = pt.area_sigma_fraction * pt.capacitance_f;
            const double r = (pt.capacitance_f - fit.kappa * x) / sig;
            chi2 += r * r;
        }
        variance *= chi2 / static_cast<double>(points.size() - 1);
    }
    fit.sigma_kappa = std::sqrt(variance);
    return fit;
}

// Reference data backing the parallel-plate model used by kappa_fit: plate
// estimates (edge-corrected) against field-solver results for three fabricated
// devices. Plate and solver values agree to well under a percent, so fringing
// corrections are below the area uncertainty and can be ignored in the fit.
struct PlateModelReference {
    const char* device;
    double c_plate_f;  // parallel-plate estimate with edge correction
    double c_solver_f; // finite-element field solver
    double c_meas_f;   // measured
};

inline constexpr PlateModelReference plate_model_reference[] = {
    {"A", 399e-15, 400e-15, 388e-15},
    {"B", 367e-15, 370e-15, 406e-15},
    {"C", 336e-15, 339e-15, 354e-15},
};

} // namespace tlres
