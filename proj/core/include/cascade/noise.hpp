#pragma once

#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// Junction relaxation environment, reduced to frequency-resolved downward and
// upward rates.  Frequencies are offsets from the dressed junction frequency
// (the only frequencies the rate formulas ever query are within a few chi_bb
// of it, so no absolute scale is needed).
struct NoiseSpectrum {
    enum class Kind { white, bandpass };

    Kind kind = Kind::white;
    double gamma_down_flat = 0.0;
    double gamma_up_flat = 0.0;
    // bandpass: gamma_in inside |offset - center| <= halfwidth, gamma_out outside
    double center = 0.0;
    double halfwidth = 0.0;
    double gamma_in = 0.0;
    double gamma_out = 0.0;

    // Frequency-independent decay at rate Gamma_1.
    static NoiseSpectrum white(double Gamma_1);
    // Lossy bath mode coupling Omega, linewidth gamma, occupation n_th:
    // Gamma_down = 4 (1 + n_th) |Omega|^2 / gamma, Gamma_up = 4 n_th |Omega|^2 / gamma.
    static NoiseSpectrum from_bath(double Omega, double gamma, double n_th);
    static NoiseSpectrum bandpass(double center, double halfwidth, double gamma_in,
                                  double gamma_out);

    double gamma_down(double offset) const;
    double gamma_up(double offset) const;

    void validate() const;  // Gamma_down >= Gamma_up >= 0 everywhere
};

} // namespace cascade
