#pragma once

#include "cascade/lindblad.hpp"
#include "cascade/noise.hpp"
#include "cascade/rwa.hpp"

namespace cascade {

// Engineered cavity dissipation after both the bath and the junction are
// eliminated:
//   kappa_4ph = 4 |g_4ph|^2 / (2 Gd[-chi_bb] + Gamma_fg_eng)
//   kappa_2ph = |g1|^2/Delta^2 Gd[+Delta] + |g2|^2/(Delta+chi_bb)^2 Gd[-Delta-chi_bb]
//   alpha^4   = eps_4ph / g_4ph            (principal fourth root)
// where Gd[x] is the downward rate at offset x from the junction frequency.
struct CavityRates {
    double kappa_4ph = 0.0;
    double kappa_2ph = 0.0;
    cd alpha{0.0, 0.0};
};

CavityRates cavity_rates(const EffectiveCoeffs& coeffs, const PumpConfig& pumps,
                         const DeviceParams& params, const NoiseSpectrum& spectrum);

// Rates of the three-level ladder master equation, from the eliminated-bath
// coefficient rows evaluated on junction levels g, e, f (n = 0, 1, 2).
// With W1 = Gd[+Delta], W2 = Gd[-Delta-chi_bb], S = chi_bb + Delta,
// T = 2 chi_bb + Delta, R = chi_bb - Delta:
//   gamma_eg  = Gd[0]
//   gamma_fe  = 2 Gd[-chi_bb]
//   kappa2_gg = |g1|^2/Delta^2 W1          + |g2|^2/S^2 W2
//   kappa2_ee = |g1|^2 R^2/(Delta S)^2 W1  + |g2|^2 T^2/(Delta S)^2 W2
//   kappa2_ff = |g1|^2 R^2/(T S)^2 W1      + |g2|^2 T^2/(Delta R)^2 W2
//   kappa2_fg = 2 chi_bb^2 (|g1|^2 W1 + |g2|^2 W2)/(Delta S)^2
// Upward (_up) counterparts use Gu at the same offsets and vanish at n_th = 0.
struct ThreeLevelRates {
    double gamma_eg = 0.0;
    double gamma_fe = 0.0;
    double kappa2_gg = 0.0;
    double kappa2_ee = 0.0;
    double kappa2_ff = 0.0;
    double kappa2_fg = 0.0;
    double gamma_eg_up = 0.0;
    double gamma_fe_up = 0.0;
    double kappa2_gg_up = 0.0;
    double kappa2_ee_up = 0.0;
    double kappa2_ff_up = 0.0;
    double kappa2_fg_up = 0.0;
};

ThreeLevelRates three_level_rates(const PumpConfig& pumps, const DeviceParams& params,
                                  const NoiseSpectrum& spectrum);

// Three-level x cavity master equation: H_eff plus the ladder dissipators
// (junction decay, level-conditioned two-photon cavity loss, engineered f->g
// decay, and f->g decay with two-photon re-emission).
LindbladModel build_three_level_me(const EffectiveCoeffs& coeffs, const ThreeLevelRates& rates,
                                   double Gamma_fg_eng, const HilbertSpace& space);

// Cavity-only master equation after junction elimination:
//   H = (zeta_gaa - chi_aa) a^dag2 a^2,
//   kappa_4ph D[a^4 - alpha^4] + kappa_2ph D[a^2].
LindbladModel build_cavity_me(const EffectiveCoeffs& coeffs, const CavityRates& rates,
                              int cavity_dim);

// Leading error probabilities over a hold time dt:
//   p1 = (|alpha|^2 kappa_1ph dt)^2 / 2   (uncorrectable double single-photon loss)
//   p2 = |alpha|^4 kappa_2ph dt           (uncorrectable two-photon loss)
// The two-photon channel is subdominant when kappa_2ph < kappa_1ph^2 dt / 2.
struct ErrorBudget {
    double p1 = 0.0;
    double p2 = 0.0;
    double ratio = 0.0;  // p2 / p1
    bool two_photon_subdominant = false;
    bool below_percent_of_single = false;  // kappa_2ph < kappa_1ph / 100
};

ErrorBudget error_budget(double kappa_1ph, double kappa_2ph, double alpha_abs, double dt);

} // namespace cascade
