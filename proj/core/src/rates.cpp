#include "cascade/rates.hpp"

#include <cmath>

namespace cascade {

CavityRates cavity_rates(const EffectiveCoeffs& coeffs, const PumpConfig& pumps,
                         const DeviceParams& params, const NoiseSpectrum& spectrum) {
    spectrum.validate();
    CavityRates r;
    const double depletion =
        2.0 * spectrum.gamma_down(-params.chi_bb) + params.Gamma_fg_eng;
    if (depletion <= 0.0)
        throw InvalidRegime("cavity_rates: f-level depletion rate must be positive");
    r.kappa_4ph = 4.0 * std::norm(coeffs.g_4ph) / depletion;

    const double D = params.Delta;
    const double S = params.Delta + params.chi_bb;
    r.kappa_2ph = std::norm(pumps.g1) / (D * D) * spectrum.gamma_down(D) +
                  std::norm(pumps.g2) / (S * S) * spectrum.gamma_down(-S);

    if (coeffs.g_4ph == cd(0.0)) {
        if (coeffs.eps_4ph != cd(0.0))
            throw InvalidRegime("cavity_rates: eps_4ph without four-photon exchange leaves alpha undefined");
        r.alpha = 0.0;
    } else {
        r.alpha = std::pow(coeffs.eps_4ph / coeffs.g_4ph, 0.25);
    }
    return r;
}

ThreeLevelRates three_level_rates(const PumpConfig& pumps, const DeviceParams& params,
                                  const NoiseSpectrum& spectrum) {
    spectrum.validate();
    const double D = params.Delta;
    const double S = params.chi_bb + D;
    const double T = 2.0 * params.chi_bb + D;
    const double R = params.chi_bb - D;
    if (D <= 0.0 || R <= 0.0)
        throw InvalidRegime("three_level_rates: requires chi_bb > Delta > 0");
    const double g1_sq = std::norm(pumps.g1);
    const double g2_sq = std::norm(pumps.g2);

    // weights of the level-conditioned two-photon channels
    const double w_gg1 = g1_sq / (D * D), w_gg2 = g2_sq / (S * S);
    const double w_ee1 = g1_sq * R * R / (D * D * S * S), w_ee2 = g2_sq * T * T / (D * D * S * S);
    const double w_ff1 = g1_sq * R * R / (T * T * S * S), w_ff2 = g2_sq * T * T / (D * D * R * R);
    const double w_fg1 = 2.0 * g1_sq * params.chi_bb * params.chi_bb / (D * D * S * S);
    const double w_fg2 = 2.0 * g2_sq * params.chi_bb * params.chi_bb / (D * D * S * S);

    const double W1d = spectrum.gamma_down(D), W2d = spectrum.gamma_down(-S);
    const double W1u = spectrum.gamma_up(D), W2u = spectrum.gamma_up(-S);

    ThreeLevelRates r;
    r.gamma_eg = spectrum.gamma_down(0.0);
    r.gamma_fe = 2.0 * spectrum.gamma_down(-params.chi_bb);
    r.gamma_eg_up = spectrum.gamma_up(0.0);
    r.gamma_fe_up = 2.0 * spectrum.gamma_up(-params.chi_bb);
    r.kappa2_gg = w_gg1 * W1d + w_gg2 * W2d;
    r.kappa2_ee = w_ee1 * W1d + w_ee2 * W2d;
    r.kappa2_ff = w_ff1 * W1d + w_ff2 * W2d;
    r.kappa2_fg = w_fg1 * W1d + w_fg2 * W2d;
    r.kappa2_gg_up = w_gg1 * W1u + w_gg2 * W2u;
    r.kappa2_ee_up = w_ee1 * W1u + w_ee2 * W2u;
    r.kappa2_ff_up = w_ff1 * W1u + w_ff2 * W2u;
    r.kappa2_fg_up = w_fg1 * W1u + w_fg2 * W2u;
    return r;
}

LindbladModel build_three_level_me(const EffectiveCoeffs& coeffs, const ThreeLevelRates& rates,
                                   double Gamma_fg_eng, const HilbertSpace& space) {
    if (space.junction_dim != 3)
        throw InvalidDimension("build_three_level_me: junction_dim must be 3");
    FourierHamiltonian fh;
    fh.space = space;
    fh.static_part = build_H_eff(coeffs, space).m;

    const Matrix a = embed(annihilation(space.cavity_dim), space).m;
    const Matrix a2 = a * a;
    auto jt = [&](int from, int to) { return embed(junction_transition(from, to, 3), space).m; };
    const Matrix s_gg = jt(0, 0), s_ee = jt(1, 1), s_ff = jt(2, 2);

    std::vector<CollapseOp> ops;
    auto add = [&](double rate, const Matrix& L, const char* label) {
        if (rate > 0.0) ops.push_back({rate, to_sparse(L), label});
    };
    add(rates.gamma_eg, jt(1, 0), "sigma_eg");
    add(rates.gamma_fe, jt(2, 1), "sigma_fe");
    add(rates.kappa2_gg, a2 * s_gg, "a2_gg");
    add(rates.kappa2_ee, a2 * s_ee, "a2_ee");
    add(rates.kappa2_ff, a2 * s_ff, "a2_ff");
    add(Gamma_fg_eng, jt(2, 0), "sigma_fg_eng");
    add(rates.kappa2_fg, a2.adjoint() * jt(2, 0), "a2dag_fg");
    // thermal counterparts (absent at n_th = 0)
    add(rates.gamma_eg_up, jt(0, 1), "sigma_ge");
    add(rates.gamma_fe_up, jt(1, 2), "sigma_ef");
    add(rates.kappa2_gg_up, a2.adjoint() * s_gg, "a2dag_gg");
    add(rates.kappa2_ee_up, a2.adjoint() * s_ee, "a2dag_ee");
    add(rates.kappa2_ff_up, a2.adjoint() * s_ff, "a2dag_ff");
    add(rates.kappa2_fg_up, a2 * jt(0, 2), "a2_gf");

    return make_model(fh, std::move(ops));
}

LindbladModel build_cavity_me(const EffectiveCoeffs& coeffs, const CavityRates& rates,
                              int cavity_dim) {
    const HilbertSpace space(cavity_dim, 1);
    const Matrix a = annihilation(cavity_dim).m;
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix num = a.adjoint() * a;

    FourierHamiltonian fh;
    fh.space = space;
    fh.static_part = (coeffs.zeta_gaa - coeffs.chi_aa) * (num * num - num);

    const cd alpha4 = rates.alpha * rates.alpha * rates.alpha * rates.alpha;
    std::vector<CollapseOp> ops;
    if (rates.kappa_4ph > 0.0)
        ops.push_back({rates.kappa_4ph,
                       to_sparse(a4 - alpha4 * Matrix::Identity(cavity_dim, cavity_dim)),
                       "a4_minus_alpha4"});
    if (rates.kappa_2ph > 0.0) ops.push_back({rates.kappa_2ph, to_sparse(a2), "a2"});
    return make_model(fh, std::move(ops));
}

ErrorBudget error_budget(double kappa_1ph, double kappa_2ph, double alpha_abs, double dt) {
    if (kappa_1ph < 0.0 || kappa_2ph < 0.0 || dt <= 0.0)
        throw InvalidRegime("error_budget: rates must be non-negative and dt positive");
    ErrorBudget b;
    const double n = alpha_abs * alpha_abs;
    b.p1 = 0.5 * (n * kappa_1ph * dt) * (n * kappa_1ph * dt);
    b.p2 = n * n * kappa_2ph * dt;
    b.ratio = b.p1 > 0.0 ? b.p2 / b.p1 : 0.0;
    b.two_photon_subdominant = kappa_2ph < 0.5 * kappa_1ph * kappa_1ph * dt;
    b.below_percent_of_single = kappa_2ph < 0.01 * kappa_1ph;
    return b;
}

} // namespace cascade
