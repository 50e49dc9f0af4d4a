#pragma once
// Shared error types, numeric constants, and the complex alias used across
// the tlres library.

#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tlres {

using complex = std::complex<double>;

// Base class for every error thrown by the library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument values or violated preconditions.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// The requested mode index does not correspond to a physical resonance.
class unphysical_mode_error : public domain_error {
public:
    explicit unphysical_mode_error(const std::string& what) : domain_error(what) {}
};

// Measured data are inconsistent with the hypothesised load kind.
class kind_mismatch_error : public domain_error {
public:
    explicit kind_mismatch_error(const std::string& what) : domain_error(what) {}
};

// Input sits on a pole or degenerate geometry of the requested map.
class singular_error : public error {
public:
    explicit singular_error(const std::string& what) : error(what) {}
};

// An iterative solver failed to converge to its tolerance.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& what) : error(what) {}
};

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double infinity = std::numeric_limits<double>::infinity();

namespace detail {

inline void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw domain_error(std::string(name) + " must be finite");
}

inline void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error(std::string(name) + " must be positive and finite");
}

} // namespace detail
} // namespace tlres
