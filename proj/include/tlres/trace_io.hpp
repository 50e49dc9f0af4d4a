#pragma once
// CSV interchange for S21 traces and measured mode tables. The formats are
// fixed for byte-exact round trips: traces carry the header
// freq_hz,re_s21,im_s21 and mode tables mode_n,f_r_hz,q_i (plus optional
// sigma_f_hz,sigma_q columns); numbers are plain decimal, shortest
// round-trip form, no locale.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "calibrate.hpp"
#include "core.hpp"
#include "trace.hpp"

namespace tlres {

inline constexpr const char* trace_csv_header = "freq_hz,re_s21,im_s21";
inline constexpr const char* mode_csv_header = "mode_n,f_r_hz,q_i";
inline constexpr const char* mode_csv_header_sigma = "mode_n,f_r_hz,q_i,sigma_f_hz,sigma_q";

namespace detail {

// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view field, std::size_t line_no, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v))
        throw domain_error("line " + std::to_string(line_no) + ": cannot parse " + what +
                           " from '" + std::string(field) + "'");
    return v;
}

inline int parse_int(std::string_view field, std::size_t line_no, const char* what) {
    int v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw domain_error("line " + std::to_string(line_no) + ": cannot parse " + what +
                           " from '" + std::string(field) + "'");
    return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// getline with CRLF tolerance; empty lines are reported as empty strings.
inline bool next_csv_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace detail

inline void write_trace_csv(const ComplexTrace& trace, std::ostream& out) {
    trace.validate();
    out << trace_csv_header << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << detail::format_double(trace.freqs[i]) << ','
            << detail::format_double(trace.s21[i].real()) << ','
            << detail::format_double(trace.s21[i].imag()) << '\n';
}

inline ComplexTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!detail::next_csv_line(in, line) || line != trace_csv_header)
        throw domain_error(std::string("expected trace header '") + trace_csv_header + "'");
    ComplexTrace trace;
    std::size_t line_no = 1;
    while (detail::next_csv_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != 3)
            throw domain_error("line " + std::to_string(line_no) + ": expected 3 columns, got " +
                               std::to_string(fields.size()));
        trace.freqs.push_back(detail::parse_double(fields[0], line_no, "freq_hz"));
        const double re = detail::parse_double(fields[1], line_no, "re_s21");
        const double im = detail::parse_double(fields[2], line_no, "im_s21");
        trace.s21.emplace_back(re, im);
    }
    trace.validate();
    return trace;
}

inline void write_mode_table_csv(const std::vector<ModeMeasurement>& modes, std::ostream& out) {
    bool with_sigma = false;
    for (const auto& m : modes)
        if (m.sigma_f != 0.0 || m.sigma_q != 0.0) with_sigma = true;
    out << (with_sigma ? mode_csv_header_sigma : mode_csv_header) << '\n';
    for (const auto& m : modes) {
        out << m.mode_n << ',' << detail::format_double(m.f_r) << ','
            << detail::format_double(m.q_i);
        if (with_sigma)
            out << ',' << detail::format_double(m.sigma_f) << ','
                << detail::format_double(m.sigma_q);
        out << '\n';
    }
}

inline std::vector<ModeMeasurement> read_mode_table_csv(std::istream& in) {
    std::string line;
    if (!detail::next_csv_line(in, line))
        throw domain_error(std::string("expected mode-table header '") + mode_csv_header + "'");
    bool with_sigma = false;
    if (line == mode_csv_header_sigma)
        with_sigma = true;
    else if (line != mode_csv_header)
        throw domain_error(std::string("expected mode-table header '") + mode_csv_header + "'");
    std::vector<ModeMeasurement> modes;
    std::size_t line_no = 1;
    const std::size_t n_cols = with_sigma ? 5 : 3;
    while (detail::next_csv_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != n_cols)
            throw domain_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(n_cols) + " columns, got " +
                               std::to_string(fields.size()));
        ModeMeasurement m;
        m.mode_n = detail::parse_int(fields[0], line_no, "mode_n");
        m.f_r = detail::parse_double(fields[1], line_no, "f_r_hz");
        m.q_i = detail::parse_double(fields[2], line_no, "q_i");
        if (m.f_r <= 0.0)
            throw domain_error("line " + std::to_string(line_no) + ": f_r_hz must be positive");
        if (m.q_i < 0.0)
            throw domain_error("line " + std::to_string(line_no) + ": q_i must be non-negative");
        if (with_sigma) {
            m.sigma_f = detail::parse_double(fields[3], line_no, "sigma_f_hz");
            m.sigma_q = detail::parse_double(fields[4], line_no, "sigma_q");
            if (m.sigma_f < 0.0 || m.sigma_q < 0.0)
                throw domain_error("line " + std::to_string(line_no) +
                                   ": sigmas must be non-negative");
        }
        modes.push_back(m);
    }
    return modes;
}

// Path convenience wrappers.

inline ComplexTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open trace file " + path);
    try {
        return read_trace_csv(in);
    } catch (const domain_error& e) {
        throw domain_error(path + ": " + e.what());
    }
}

inline void write_trace_csv(const ComplexTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw domain_error("cannot open trace file for writing " + path);
    write_trace_csv(trace, out);
    out.flush();
    if (!out) throw error("failed writing trace file " + path);
}

inline std::vector<ModeMeasurement> read_mode_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open mode table " + path);
    try {
        return read_mode_table_csv(in);
    } catch (const domain_error& e) {
        throw domain_error(path + ": " + e.what());
    }
}

inline void write_mode_table_csv(const std::vector<ModeMeasurement>& modes,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw domain_error("cannot open mode table for writing " + path);
    write_mode_table_csv(modes, out);
    out.flush();
    if (!out) throw error("failed writing mode table " + path);
}

} // namespace tlres
