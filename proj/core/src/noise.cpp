#include "cascade/noise.hpp"

#include <cmath>

namespace cascade {

NoiseSpectrum NoiseSpectrum::white(double Gamma_1) {
    NoiseSpectrum s;
    s.kind = Kind::white;
    s.gamma_down_flat = Gamma_1;
    s.gamma_up_flat = 0.0;
    s.validate();
    return s;
}

NoiseSpectrum NoiseSpectrum::from_bath(double Omega, double gamma, double n_th) {
    if (gamma <= 0.0) throw InvalidRegime("NoiseSpectrum::from_bath: gamma must be positive");
    if (n_th < 0.0) throw InvalidRegime("NoiseSpectrum::from_bath: n_th must be non-negative");
    NoiseSpectrum s;
    s.kind = Kind::white;
    const double base = 4.0 * Omega * Omega / gamma;
    s.gamma_down_flat = (1.0 + n_th) * base;
    s.gamma_up_flat = n_th * base;
    s.validate();
    return s;
}

NoiseSpectrum NoiseSpectrum::bandpass(double center, double halfwidth, double gamma_in,
                                      double gamma_out) {
    if (halfwidth <= 0.0) throw InvalidRegime("NoiseSpectrum::bandpass: halfwidth must be positive");
    NoiseSpectrum s;
    s.kind = Kind::bandpass;
    s.center = center;
    s.halfwidth = halfwidth;
    s.gamma_in = gamma_in;
    s.gamma_out = gamma_out;
    s.validate();
    return s;
}

double NoiseSpectrum::gamma_down(double offset) const {
    if (kind == Kind::white) return gamma_down_flat;
    return std::abs(offset - center) <= halfwidth ? gamma_in : gamma_out;
}

double NoiseSpectrum::gamma_up(double) const {
    if (kind == Kind::white) return gamma_up_flat;
    return 0.0;
}

void NoiseSpectrum::validate() const {
    if (kind == Kind::white) {
        if (gamma_up_flat < 0.0 || gamma_down_flat < gamma_up_flat)
            throw InvalidRegime("NoiseSpectrum: requires Gamma_down >= Gamma_up >= 0");
    } else {
        if (gamma_in < 0.0 || gamma_out < 0.0)
            throw InvalidRegime("NoiseSpectrum: bandpass rates must be non-negative");
    }
}

} // namespace cascade
