#pragma once
// Frequency-indexed complex S21 samples, the interchange object between the
// network synthesiser and the notch fitter.

#include <cmath>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace tlres {

struct ComplexTrace {
    std::vector<double> freqs; // Hz, strictly increasing
    std::vector<complex> s21;

    std::size_t size() const { return freqs.size(); }

    void validate() const {
        if (freqs.size() != s21.size())
            throw domain_error("trace frequency and sample counts differ");
        if (freqs.empty()) throw domain_error("trace is empty");
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            if (!(freqs[i] > 0.0) || !std::isfinite(freqs[i]))
                throw domain_error("trace frequencies must be positive and finite");
            if (!std::isfinite(s21[i].real()) || !std::isfinite(s21[i].imag()))
                throw domain_error("trace samples must be finite");
            if (i > 0 && !(freqs[i] > freqs[i - 1]))
                throw domain_error("trace frequencies must be strictly increasing");
        }
    }
};

} // namespace tlres
