#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <tlres/loss.hpp>
#include <tlres/netsynth.hpp>

using namespace tlres;
using Catch::Approx;

namespace {

LineSpec lossy_line() {
    LineSpec line;
    line.z0 = 50.0;
    line.f_open = 7e9;
    line.attenuation.q_open_ref = 5e4;
    line.attenuation.exponent_s = 1.0;
    return line;
}

HangerNetwork reference_net(double coupling_c) {
    HangerNetwork net;
    net.line = lossy_line();
    net.load = LoadModel::capacitor(606e-15, 1e-5);
    net.coupling_c = coupling_c;
    net.feed_z0 = 50.0;
    return net;
}

} // namespace

TEST_CASE("matched termination makes the line invisible", "[netsynth]") {
    LineSpec line = lossy_line();
    for (double f : {1e9, 3.5e9, 7e9, 11.3e9}) {
        const complex z = input_impedance(line, complex(50.0, 0.0), f);
        CHECK(z.real() == Approx(50.0).epsilon(1e-12));
        CHECK(z.imag() == Approx(0.0).margin(1e-9));
    }
    line.attenuation = AttenuationModel{}; // lossless too
    const complex z = input_impedance(line, complex(50.0, 0.0), 5.1e9);
    CHECK(z.real() == Approx(50.0).epsilon(1e-14));
    CHECK(z.imag() == Approx(0.0).margin(1e-12));
}

TEST_CASE("quarter and half wave transforms", "[netsynth]") {
    LineSpec line = lossy_line();
    line.attenuation = AttenuationModel{}; // ideal line
    const complex open(infinity, 0.0);
    // a short a quarter wave away looks open
    CHECK(std::abs(input_impedance(line, complex(0.0, 0.0), 3.5e9)) > 1e12);
    // an open a quarter wave away looks like a short
    CHECK(std::abs(input_impedance(line, open, 3.5e9)) < 1e-6);
    // a half wave reproduces an open termination
    CHECK(std::abs(input_impedance(line, open, 7e9)) > 1e12);
    // and reproduces a generic load
    const complex zl(12.0, -34.0);
    const complex z = input_impedance(line, zl, 7e9);
    CHECK(z.real() == Approx(12.0).margin(1e-9));
    CHECK(z.imag() == Approx(-34.0).margin(1e-9));
}

TEST_CASE("chain matrix is reciprocal and consistent with the direct formula",
          "[netsynth]") {
    const HangerNetwork net = reference_net(5e-15);
    for (double f : {4.9e9, 5.2353e9, 5.6e9, 7e9}) {
        const Abcd m = hanger_abcd(net, f);
        CHECK(m.determinant() == complex(1.0, 0.0)); // shunt-only network
        CHECK(abcd_s21(m, net.feed_z0) == abcd_s12(m, net.feed_z0));
        const complex direct = hanger_s21_at(net, f);
        const complex via_abcd = abcd_s21(m, net.feed_z0);
        CHECK(via_abcd.real() == Approx(direct.real()).margin(1e-12));
        CHECK(via_abcd.imag() == Approx(direct.imag()).margin(1e-12));
    }
}

TEST_CASE("synthesised sweep shows a passive notch at the resonance", "[netsynth]") {
    const HangerNetwork net = reference_net(5e-15);
    const auto w = find_notch_window(net, 1);
    CHECK(w.depth == Approx(0.5427).margin(0.01));
    CHECK(w.background == Approx(1.0).margin(1e-4));

    const auto freqs = linear_grid(w.f_notch, 20.0 * w.fwhm, 2001);
    const auto trace = synth_s21(net, freqs);
    REQUIRE(trace.size() == 2001);
    double min_mag = 2.0;
    std::size_t min_i = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double mag = std::abs(trace.s21[i]);
        CHECK(mag <= 1.0 + 1e-9); // passivity
        if (mag < min_mag) {
            min_mag = mag;
            min_i = i;
        }
    }
    // the dip sits mid-grid, at the located notch
    CHECK(min_i > 900);
    CHECK(min_i < 1100);
    CHECK(min_mag == Approx(w.background - w.depth).margin(1e-4));
}

TEST_CASE("lossless notch reaches the origin", "[netsynth]") {
    HangerNetwork net = reference_net(5e-15);
    net.line.attenuation = AttenuationModel{};
    net.load = LoadModel::capacitor(606e-15, 0.0);
    const auto w = find_notch_window(net, 1);
    CHECK(w.background - w.depth < 1e-6); // |S21| minimum is zero
}

TEST_CASE("coupling controls pull and depth", "[netsynth]") {
    // pull is negative (coupling loads the mode down) and linear in C_c
    const auto pull5 = frequency_pull(reference_net(5e-15), 1);
    CHECK(pull5.f_r_analytic == Approx(5.250461758e9).epsilon(1e-6));
    CHECK(pull5.pull_hz / pull5.f_r_analytic == Approx(-2.878e-3).epsilon(0.02));
    const auto pull1 = frequency_pull(reference_net(1e-15), 1);
    CHECK(pull1.pull_hz / pull5.pull_hz == Approx(0.2).epsilon(0.1));
    // an attofarad of coupling pulls less than 1e-6 relative
    const auto tiny = frequency_pull(reference_net(1e-18), 1);
    CHECK(std::fabs(tiny.pull_hz) < 1e-6 * tiny.f_r_analytic);

    // dip depth follows the external coupling, which scales as C_c^2
    const auto w5 = find_notch_window(reference_net(5e-15), 1);
    const auto w1 = find_notch_window(reference_net(1e-15), 1);
    const double k5 = w5.depth / (1.0 - w5.depth); // Q_i / Q_c at 5 fF
    const double k1 = w1.depth / (1.0 - w1.depth);
    CHECK(k1 / k5 == Approx(0.04).epsilon(0.02));

    // once decoupled, the dip width collapses onto the internal linewidth
    const auto wd = find_notch_window(reference_net(1e-17), 1);
    const auto sol = solve_resonance(lossy_line(), LoadModel::capacitor(606e-15, 1e-5), 1);
    const auto budget = qi_forward(sol.phase, 1e-5, lossy_line().attenuation);
    CHECK(wd.fwhm == Approx(wd.f_notch * budget.q_i_inv).epsilon(1e-3));
}

TEST_CASE("coupling tuner meets a pull target deterministically", "[netsynth]") {
    const auto tuned = tune_coupling_for_pull(reference_net(50e-15), 1);
    // halving from 50 fF lands on 50/4096 fF
    CHECK(tuned.coupling_c == Approx(50e-15 / 4096.0).epsilon(1e-12));
    const auto rep = frequency_pull(tuned, 1);
    CHECK(std::fabs(rep.pull_hz) <= 8e-6 * rep.f_r_analytic);
}

TEST_CASE("grid builder and input validation", "[netsynth]") {
    const auto grid = linear_grid(5e9, 1e8, 5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 4.95e9);
    CHECK(grid.back() == 5.05e9);
    CHECK(grid[2] == Approx(5e9).epsilon(1e-14));
    CHECK_THROWS_AS(linear_grid(5e9, 1e8, 1), domain_error);
    CHECK_THROWS_AS(linear_grid(5e9, -1e8, 5), domain_error);
    CHECK_THROWS_AS(linear_grid(5e7, 1e9, 5), domain_error); // reaches f <= 0

    HangerNetwork bad = reference_net(5e-15);
    bad.coupling_c = 0.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    CHECK_THROWS_AS(synth_s21(bad, {1e9, 2e9}), domain_error);

    const HangerNetwork net = reference_net(5e-15);
    CHECK_THROWS_AS(synth_s21(net, {2e9, 1e9}), domain_error); // unsorted
    CHECK_THROWS_AS(synth_s21(net, {-1e9, 1e9}), domain_error);
    CHECK_THROWS_AS(locate_notch(net, 5e9, 4e9), domain_error);
}
