#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <tlres/trace_io.hpp>

using namespace tlres;

namespace {

ComplexTrace small_trace() {
    ComplexTrace t;
    t.freqs = {1e9, 2e9};
    t.s21 = {{1.0, 0.0}, {0.5, -0.25}};
    return t;
}

} // namespace

TEST_CASE("trace csv emits the fixed golden format", "[trace_io]") {
    std::ostringstream out;
    write_trace_csv(small_trace(), out);
    CHECK(out.str() == "freq_hz,re_s21,im_s21\n"
                       "1e+09,1,0\n"
                       "2e+09,0.5,-0.25\n");
}

TEST_CASE("trace csv round-trips bit exactly", "[trace_io]") {
    ComplexTrace t;
    // awkward values: shortest-form serialization must still round-trip
    t.freqs = {3.446e9, 6.98e9, 7123456789.012345, 7123456789.012346};
    t.s21 = {{0.123456789012345678, -1e-12},
             {-0.9999999999999999, 0.3333333333333333},
             {1.0, -1.0},
             {5e-324, 0.0}}; // smallest subnormal
    std::ostringstream out;
    write_trace_csv(t, out);
    std::istringstream in(out.str());
    const auto back = read_trace_csv(in);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.freqs[i] == t.freqs[i]);
        CHECK(back.s21[i].real() == t.s21[i].real());
        CHECK(back.s21[i].imag() == t.s21[i].imag());
    }
    // serialization is deterministic
    std::ostringstream again;
    write_trace_csv(back, again);
    CHECK(again.str() == out.str());
}

TEST_CASE("trace csv parsing is strict", "[trace_io]") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_trace_csv(in);
    };
    CHECK_THROWS_AS(parse("frequency,re,im\n1e9,1,0\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n1e9,1\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n1e9,1,0,9\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n1e9,one,0\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n1e9,nan,0\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n1e9, 1,0\n"), domain_error); // no padding
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n"), domain_error);           // empty trace
    // non-monotone frequency grid
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n2e9,1,0\n1e9,1,0\n"), domain_error);
    CHECK_THROWS_AS(parse("freq_hz,re_s21,im_s21\n-1e9,1,0\n"), domain_error);

    // CRLF endings and blank lines are tolerated
    const auto t = parse("freq_hz,re_s21,im_s21\r\n1e+09,1,0\r\n\r\n2e+09,0.5,-0.25\r\n\n");
    CHECK(t.size() == 2);
    CHECK(t.freqs[1] == 2e9);
    CHECK(t.s21[1] == complex(0.5, -0.25));
}

TEST_CASE("mode table round-trips in both layouts", "[trace_io]") {
    std::vector<ModeMeasurement> modes(2);
    modes[0].mode_n = 1;
    modes[0].f_r = 3.446e9;
    modes[0].q_i = 2.103e5;
    modes[1].mode_n = 2;
    modes[1].f_r = 6.98e9;
    modes[1].q_i = 2.745e5;

    std::ostringstream plain;
    write_mode_table_csv(modes, plain);
    CHECK(plain.str() == "mode_n,f_r_hz,q_i\n"
                         "1,3.446e+09,210300\n"
                         "2,6.98e+09,274500\n");
    {
        std::istringstream in(plain.str());
        const auto back = read_mode_table_csv(in);
        REQUIRE(back.size() == 2);
        CHECK(back[0].mode_n == 1);
        CHECK(back[0].f_r == modes[0].f_r);
        CHECK(back[0].q_i == modes[0].q_i);
        CHECK(back[0].sigma_f == 0.0);
        CHECK(back[1].mode_n == 2);
        CHECK(back[1].f_r == modes[1].f_r);
    }

    // any nonzero sigma switches to the extended header
    modes[0].sigma_f = 5e5;
    modes[1].sigma_f = 5e5;
    modes[0].sigma_q = 1.2e4;
    std::ostringstream ext;
    write_mode_table_csv(modes, ext);
    CHECK(ext.str().rfind("mode_n,f_r_hz,q_i,sigma_f_hz,sigma_q\n", 0) == 0);
    {
        std::istringstream in(ext.str());
        const auto back = read_mode_table_csv(in);
        REQUIRE(back.size() == 2);
        CHECK(back[0].sigma_f == 5e5);
        CHECK(back[0].sigma_q == 1.2e4);
        CHECK(back[1].sigma_q == 0.0);
    }
}

TEST_CASE("mode table parsing is strict", "[trace_io]") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_mode_table_csv(in);
    };
    CHECK_THROWS_AS(parse(""), domain_error);
    CHECK_THROWS_AS(parse("n,f,q\n1,3e9,1e5\n"), domain_error);
    CHECK_THROWS_AS(parse("mode_n,f_r_hz,q_i\n1,3e9\n"), domain_error);
    CHECK_THROWS_AS(parse("mode_n,f_r_hz,q_i\n1.5,3e9,1e5\n"), domain_error);
    CHECK_THROWS_AS(parse("mode_n,f_r_hz,q_i\n1,-3e9,1e5\n"), domain_error);
    CHECK_THROWS_AS(parse("mode_n,f_r_hz,q_i\n1,3e9,-1e5\n"), domain_error);
    CHECK_THROWS_AS(parse("mode_n,f_r_hz,q_i,sigma_f_hz,sigma_q\n1,3e9,1e5,-1,0\n"),
                    domain_error);
    // a zero q_i marks "not measured" and is allowed
    const auto ok = parse("mode_n,f_r_hz,q_i\n1,3.446e+09,0\n");
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].q_i == 0.0);
}

TEST_CASE("file path helpers report real locations", "[trace_io]") {
    CHECK_THROWS_AS(read_trace_csv(std::string("/nonexistent/trace.csv")), domain_error);
    CHECK_THROWS_AS(read_mode_table_csv(std::string("/nonexistent/modes.csv")), domain_error);

    const std::string dir = "/tmp/tlres_trace_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/trace.csv";
    write_trace_csv(small_trace(), path);
    const auto back = read_trace_csv(path);
    CHECK(back.size() == 2);
    CHECK(back.freqs[0] == 1e9);

    const std::string mpath = dir + "/modes.csv";
    std::vector<ModeMeasurement> modes(1);
    modes[0].mode_n = 1;
    modes[0].f_r = 3.446e9;
    modes[0].q_i = 2.103e5;
    write_mode_table_csv(modes, mpath);
    const auto mback = read_mode_table_csv(mpath);
    REQUIRE(mback.size() == 1);
    CHECK(mback[0].f_r == 3.446e9);

    // parse failures carry the file path
    try {
        read_trace_csv(mpath);
        FAIL("expected a header mismatch");
    } catch (const domain_error& e) {
        CHECK(std::string(e.what()).find(mpath) != std::string::npos);
    }
}
