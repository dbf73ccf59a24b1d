#include "cascade/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <utility>

#include <json.hpp>

#include "cascade/emit.hpp"
#include "cascade/errors.hpp"
#include "cascade/propagate.hpp"
#include "cascade/rates.hpp"
#include "cascade/state.hpp"
#include "cascade/sweep.hpp"
#include "cascade/wigner.hpp"

namespace cascade {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kLevelNames[] = "gefh";

template <class... A>
std::string line(const char* f, A... a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a...);
    return std::string(buf);
}

json qty(double rad_s) { return json{{"hz", rad_s / two_pi}, {"rad_s", rad_s}}; }

json rate_qty(double rad_s) {
    json q = qty(rad_s);
    q["inverse_s"] = rad_s != 0.0 ? 1.0 / rad_s : 0.0;
    return q;
}

json cqty(cd v) {
    return json{{"abs_hz", std::abs(v) / two_pi},
                {"re_hz", v.real() / two_pi},
                {"im_hz", v.imag() / two_pi}};
}

json alpha_json(cd a) {
    return json{{"abs", std::abs(a)}, {"re", a.real()}, {"im", a.imag()}};
}

json steps_json(const Trajectory& t) {
    return json{{"accepted", t.n_accepted},
                {"rejected", t.n_rejected},
                {"rhs_evaluations", t.n_rhs},
                {"stopped_early", t.stopped_early}};
}

// Artifact writer: collects every emitted path so the report can list them.
struct Sink {
    fs::path dir;
    bool csv = true;
    bool js = true;
    std::vector<std::string> files;

    std::string claim(const std::string& name) {
        std::string p = (dir / name).string();
        files.push_back(p);
        return p;
    }

    void trajectory(const std::string& stem, const Trajectory& t) {
        if (csv) write_trajectory_csv(t, claim(stem + ".csv"));
        if (js) write_trajectory_json(t, claim(stem + ".json"));
    }

    void table(const std::string& name, const SweepTable& t) {
        if (csv) write_table_csv(t, claim(name));
    }

    void wigner_map(const std::string& name, const WignerResult& w) {
        if (csv) write_wigner_csv(w, claim(name));
    }
};

std::string us_tag(double t) { return line("t%.3fus", t * 1e6); }

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    return v;
}

std::vector<double> linspace(double t0, double t1, int samples) {
    std::vector<double> v(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i)
        v[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / samples;
    return v;
}

double default_fixed_dt(const LindbladModel& model, double span, int samples) {
    double dt = span / (50.0 * samples);
    if (model.nu_max() > 0.0) dt = std::min(dt, two_pi / model.nu_max() / 40.0);
    return dt;
}

PropagateOptions make_options(const ScenarioConfig& cfg, const RunFlags& flags,
                              const LindbladModel& model, double t1, int samples) {
    PropagateOptions o;
    o.t1 = t1;
    o.rtol = cfg.simulation.rtol;
    o.atol = cfg.simulation.atol;
    o.sample_interval = t1 / samples;
    if (flags.fixed_step)
        o.fixed_dt = cfg.simulation.fixed_dt_s > 0.0 ? cfg.simulation.fixed_dt_s
                                                     : default_fixed_dt(model, t1, samples);
    return o;
}

// Secular junction ladder decay: transition n -> n-1 runs at n Gd[-(n-1) chi_bb]
// (Kerr ladder spacing), plus the engineered f -> g channel and, when the
// spectrum carries upward weight, the reversed transitions.
std::vector<CollapseOp> junction_decay(const DeviceParams& dev, const NoiseSpectrum& sp,
                                       const HilbertSpace& space) {
    std::vector<CollapseOp> c;
    auto add = [&](double rate, int from, int to, std::string label) {
        if (rate <= 0.0) return;
        c.push_back({rate,
                     to_sparse(embed(junction_transition(from, to, space.junction_dim), space).m),
                     std::move(label)});
    };
    for (int n = 1; n < space.junction_dim; ++n) {
        const double offset = -(n - 1) * dev.chi_bb;
        add(n * sp.gamma_down(offset), n, n - 1,
            line("sigma_%c%c", kLevelNames[n], kLevelNames[n - 1]));
        add(n * sp.gamma_up(offset), n - 1, n,
            line("sigma_%c%c", kLevelNames[n - 1], kLevelNames[n]));
    }
    add(dev.Gamma_fg_eng, 2, 0, "sigma_fg_eng");
    return c;
}

void append_cavity_loss(LindbladModel& model, double kappa_1ph) {
    if (kappa_1ph <= 0.0) return;
    const auto& sp = model.space;
    model.collapse.push_back({kappa_1ph, to_sparse(embed(annihilation(sp.cavity_dim), sp).m), "a"});
}

LindbladModel effective_model(const EffectiveCoeffs& co, const HilbertSpace& space) {
    FourierHamiltonian fh{space, build_H_eff(co, space).m, {}};
    return make_model(fh);
}

Observable photon_number_obs(const HilbertSpace& space) {
    OperatorMatrix a = annihilation(space.cavity_dim);
    return Observable::expectation("n_mean", embed(a.adjoint() * a, space));
}

Observable junction_population_obs(const HilbertSpace& space, int level) {
    OperatorMatrix p = junction_transition(level, level, space.junction_dim);
    return Observable::expectation(line("p_%c", kLevelNames[level]), embed(p, space));
}

// Tr[rho_cav |C><C|] as a linear observable on the composite space.
Observable cavity_overlap_obs(const std::string& label, const QuantumState& cav_target,
                              const HilbertSpace& space) {
    OperatorMatrix proj{OpSpace::cavity, cav_target.space,
                        Matrix(cav_target.psi * cav_target.psi.adjoint())};
    return Observable::expectation(label, embed(proj, space));
}

// Midpoint of the first up- and down-crossing of `level`: the peak time of an
// oscillation that starts below level, robust to fast small-amplitude ripple.
std::optional<double> centered_crossing_time(const std::vector<double>& t,
                                             const std::vector<double>& v, double level) {
    auto interp = [&](std::size_t i) {
        const double f = (level - v[i - 1]) / (v[i] - v[i - 1]);
        return t[i - 1] + f * (t[i] - t[i - 1]);
    };
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] < level && v[i] >= level) {
            const double up = interp(i);
            for (std::size_t j = i + 1; j < v.size(); ++j)
                if (v[j - 1] >= level && v[j] < level) return 0.5 * (up + interp(j));
            return std::nullopt;
        }
    }
    return std::nullopt;
}

double max_series_gap(const Trajectory& a, const Trajectory& b, const std::string& label) {
    const auto& va = a.series(label);
    const auto& vb = b.series(label);
    const std::size_t n = std::min(va.size(), vb.size());
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

json optional_time(const std::optional<double>& t) {
    return t ? json(*t) : json(nullptr);
}

void note_truncation(const WignerResult& w, const std::string& name,
                     std::vector<std::string>* warnings) {
    for (auto flag : w.truncated)
        if (flag) {
            warnings->push_back(name + ": grid radius unreliable at the photon-number cutoff");
            return;
        }
}

json derived_json(const ScenarioConfig& cfg, const EffectiveCoeffs& co,
                  std::vector<std::string>* warnings) {
    json d;
    d["g1"] = cqty(cfg.pumps.g1);
    d["g2"] = cqty(cfg.pumps.g2);
    d["g3"] = cqty(cfg.pumps.g3);
    d["delta"] = qty(cfg.device.delta);
    d["g_4ph"] = cqty(co.g_4ph);
    d["eps_4ph"] = cqty(co.eps_4ph);
    d["chi_ea"] = qty(co.chi_ea);
    d["chi_fa"] = qty(co.chi_fa);
    d["zeta_gaa"] = qty(co.zeta_gaa);
    d["zeta_eaa"] = qty(co.zeta_eaa);
    d["zeta_faa"] = qty(co.zeta_faa);
    // Both vanish when g1 and delta satisfy the self-Kerr cancellation and
    // detuning-matching conditions.
    d["kerr_cancel_residual"] = qty(co.zeta_gaa - 0.5 * co.chi_aa);
    d["detuning_match_residual"] = qty(cfg.device.delta + 0.25 * co.chi_fa);
    KerrConsistency kc = kerr_consistency(cfg.device, warnings);
    d["kerr_consistency"] = json{{"chi_ab_expected_hz", kc.chi_ab_expected / two_pi},
                                 {"rel_deviation", kc.rel_deviation},
                                 {"within_tolerance", kc.within_tolerance}};
    return d;
}

json cavity_rates_json(const CavityRates& r) {
    json j;
    j["kappa_4ph"] = rate_qty(r.kappa_4ph);
    j["kappa_2ph"] = rate_qty(r.kappa_2ph);
    j["alpha"] = alpha_json(r.alpha);
    return j;
}

json three_level_rates_json(const ThreeLevelRates& r) {
    json j;
    j["gamma_eg"] = rate_qty(r.gamma_eg);
    j["gamma_fe"] = rate_qty(r.gamma_fe);
    j["kappa2_gg"] = rate_qty(r.kappa2_gg);
    j["kappa2_ee"] = rate_qty(r.kappa2_ee);
    j["kappa2_ff"] = rate_qty(r.kappa2_ff);
    j["kappa2_fg"] = rate_qty(r.kappa2_fg);
    j["gamma_eg_up"] = rate_qty(r.gamma_eg_up);
    j["gamma_fe_up"] = rate_qty(r.gamma_fe_up);
    j["kappa2_gg_up"] = rate_qty(r.kappa2_gg_up);
    j["kappa2_ee_up"] = rate_qty(r.kappa2_ee_up);
    j["kappa2_ff_up"] = rate_qty(r.kappa2_ff_up);
    j["kappa2_fg_up"] = rate_qty(r.kappa2_fg_up);
    return j;
}

// ---------------------------------------------------------------- derive-params

void run_derive(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
                std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    (void)flags;
    (void)sink;
    const EffectiveCoeffs co = effective_coefficients(cfg.device, cfg.pumps);
    report["derived"] = derived_json(cfg, co, warnings);

    json res;
    res["solved_g1_delta"] = cfg.solve_g1_delta;

    const NoiseSpectrum spectrum = cfg.spectrum.build(cfg.device);
    try {
        res["cavity_rates"] = cavity_rates_json(cavity_rates(co, cfg.pumps, cfg.device, spectrum));
    } catch (const std::exception& e) {
        res["cavity_rates"] = json{{"error", e.what()}};
        warnings->push_back(std::string("cavity rates unavailable: ") + e.what());
    }
    try {
        res["three_level_rates"] =
            three_level_rates_json(three_level_rates(cfg.pumps, cfg.device, spectrum));
    } catch (const std::exception& e) {
        res["three_level_rates"] = json{{"error", e.what()}};
        warnings->push_back(std::string("three-level rates unavailable: ") + e.what());
    }

    const double g4 = std::abs(co.g_4ph);
    if (g4 > 0.0) {
        const double half = 0.5 * two_pi / (2.0 * std::sqrt(24.0) * g4);
        // pi / (2 sqrt(24) g4): half period of the |f,0> <-> |g,4> exchange.
        res["exchange"] = json{{"rabi_half_period_s", half},
                               {"rabi_period_s", 2.0 * half},
                               {"matrix_element", qty(std::sqrt(24.0) * g4)}};
        summary->push_back(line("exchange half period = %.6g us", half * 1e6));
    }
    if (g4 > 0.0) {
        const cd ratio = co.eps_4ph / co.g_4ph;
        res["alpha_target"] = alpha_json(std::pow(ratio, 0.25));
    }

    const PumpFrequencies pf = pump_frequencies(0.0, 0.0, cfg.device);
    res["pump_offsets"] = json{{"note", "relative to the dressed mode frequencies (set to zero)"},
                               {"omega_p1", qty(pf.omega_p1)},
                               {"omega_p2", qty(pf.omega_p2)},
                               {"omega_p3", qty(pf.omega_p3)},
                               {"raman_plus", qty(pf.raman_detuning_plus)},
                               {"raman_minus", qty(pf.raman_detuning_minus)}};

    const int cdim = cfg.simulation.cavity_dim > 0
                         ? cfg.simulation.cavity_dim
                         : default_cavity_dim(cfg.simulation.alpha_target);
    try {
        const HilbertSpace space(cdim, cfg.simulation.junction_dim);
        RwaResult rwa = second_order_rwa(build_hsys_fourier(cfg.device, cfg.pumps, space),
                                         warnings);
        res["mode_ratio"] = json{{"max", rwa.max_mode_ratio},
                                 {"perturbative_ok", rwa.perturbative_ok},
                                 {"cavity_dim", cdim}};
    } catch (const std::exception& e) {
        res["mode_ratio"] = json{{"error", e.what()}};
        warnings->push_back(std::string("mode ratio unavailable: ") + e.what());
    }

    summary->push_back(line("g1/2pi = %.6g kHz", std::abs(cfg.pumps.g1) / two_pi / 1e3));
    summary->push_back(line("delta/2pi = %.6g kHz", cfg.device.delta / two_pi / 1e3));
    summary->push_back(line("g_4ph/2pi = %.6g kHz", g4 / two_pi / 1e3));
    if (res.contains("alpha_target") && res["alpha_target"].contains("abs"))
        summary->push_back(line("alpha = %.6g", res["alpha_target"]["abs"].get<double>()));
    if (res.contains("cavity_rates") && res["cavity_rates"].contains("kappa_4ph")) {
        const double k4 = res["cavity_rates"]["kappa_4ph"]["rad_s"].get<double>();
        const double k2 = res["cavity_rates"]["kappa_2ph"]["rad_s"].get<double>();
        if (k4 > 0.0) summary->push_back(line("1/kappa_4ph = %.6g us", 1e6 / k4));
        if (k2 > 0.0) summary->push_back(line("1/kappa_2ph = %.6g us", 1e6 / k2));
    }
    report["results"] = std::move(res);
}

// ------------------------------------------------------------------------ fig2

void run_fig2(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
              std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    const EffectiveCoeffs co = effective_coefficients(cfg.device, cfg.pumps);
    report["derived"] = derived_json(cfg, co, warnings);

    const double g4 = std::abs(co.g_4ph);
    if (g4 <= 0.0)
        throw InvalidRegime("fig2: four-photon exchange amplitude vanishes for these pumps");
    if (std::abs(cfg.pumps.g3) > 0.0)
        warnings->push_back("fig2: g3 != 0 drives the junction during the exchange oscillation");

    const double half_pred = 0.5 * two_pi / (2.0 * std::sqrt(24.0) * g4);
    const double t_final =
        cfg.simulation.t_final_s > 0.0 ? cfg.simulation.t_final_s : 6.4 * half_pred;

    const int cdim = cfg.simulation.cavity_dim > 0 ? cfg.simulation.cavity_dim : 16;
    const HilbertSpace space(cdim, cfg.simulation.junction_dim);
    const QuantumState initial = basis_state(space, 2, 0);
    const std::vector<Observable> obs = {
        Observable::population("p_f0", basis_state(space, 2, 0)),
        Observable::population("p_g4", basis_state(space, 0, 4)),
        Observable::population("p_e2", basis_state(space, 1, 2)),
    };

    LindbladModel eff = effective_model(co, space);
    Trajectory traj_eff =
        propagate(eff, initial, make_options(cfg, flags, eff, t_final, cfg.simulation.samples),
                  obs);

    LindbladModel full = make_model(build_hsys_fourier(cfg.device, cfg.pumps, space));
    Trajectory traj_full =
        propagate(full, initial, make_options(cfg, flags, full, t_final, cfg.simulation.samples),
                  obs);

    sink.trajectory("fig2_effective", traj_eff);
    sink.trajectory("fig2_full", traj_full);

    const auto half_eff = centered_crossing_time(traj_eff.times, traj_eff.series("p_g4"), 0.5);
    const auto half_full = centered_crossing_time(traj_full.times, traj_full.series("p_g4"), 0.5);
    const double peak_eff =
        *std::max_element(traj_eff.series("p_g4").begin(), traj_eff.series("p_g4").end());
    const double peak_full =
        *std::max_element(traj_full.series("p_g4").begin(), traj_full.series("p_g4").end());
    const double max_e2 =
        *std::max_element(traj_full.series("p_e2").begin(), traj_full.series("p_e2").end());

    json res;
    res["half_period_predicted_s"] = half_pred;
    res["half_period_effective_s"] = optional_time(half_eff);
    res["half_period_full_s"] = optional_time(half_full);
    if (half_eff && half_full) res["full_over_effective"] = *half_full / *half_eff;
    if (half_eff) res["periods_simulated"] = t_final / (2.0 * *half_eff);
    res["peak_p_g4_effective"] = peak_eff;
    res["peak_p_g4_full"] = peak_full;
    res["max_p_e2_full"] = max_e2;
    res["effective_steps"] = steps_json(traj_eff);
    res["full_steps"] = steps_json(traj_full);
    report["results"] = std::move(res);

    summary->push_back(line("predicted half period = %.6g us", half_pred * 1e6));
    if (half_eff) summary->push_back(line("effective half period = %.6g us", *half_eff * 1e6));
    if (half_full) summary->push_back(line("full-model half period = %.6g us", *half_full * 1e6));
    summary->push_back(line("peak p(g,4): effective %.4f, full %.4f", peak_eff, peak_full));
    summary->push_back(line("max p(e,2) in the full model = %.4g", max_e2));
}

// ------------------------------------------------------------------------ fig3

void run_fig3(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
              std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    const EffectiveCoeffs co = effective_coefficients(cfg.device, cfg.pumps);
    report["derived"] = derived_json(cfg, co, warnings);

    const NoiseSpectrum spectrum = cfg.spectrum.build(cfg.device);
    const CavityRates rates = cavity_rates(co, cfg.pumps, cfg.device, spectrum);
    if (std::abs(rates.alpha) == 0.0)
        warnings->push_back("fig3: eps_4ph = 0, the stabilization target degenerates to vacuum");

    const int cdim = cfg.simulation.cavity_dim > 0 ? cfg.simulation.cavity_dim
                                                   : default_cavity_dim(std::abs(rates.alpha));
    const double t_final = cfg.simulation.t_final_s > 0.0 ? cfg.simulation.t_final_s : 50e-6;

    const QuantumState cat = cat_state_mod4(rates.alpha, cdim, warnings);
    const HilbertSpace cspace = cavity_space(cdim);

    LindbladModel eff = build_cavity_me(co, rates, cdim);
    append_cavity_loss(eff, cfg.device.kappa_1ph);

    const std::vector<Observable> eff_obs = {
        Observable::fidelity("fidelity", cat),
        Observable::purity("purity"),
        Observable::parity("parity", cspace),
        photon_number_obs(cspace),
    };

    PropagateOptions opts = make_options(cfg, flags, eff, t_final, cfg.simulation.samples);
    opts.snapshot_times = cfg.output.snapshot_times_s.empty()
                              ? std::vector<double>{t_final}
                              : cfg.output.snapshot_times_s;
    const QuantumState vac = basis_state(cspace, 0, 0);
    Trajectory traj_eff = propagate(eff, vac, opts, eff_obs);
    sink.trajectory("fig3_effective", traj_eff);

    const auto grid = wigner_square_grid(cfg.output.wigner.range, cfg.output.wigner.points);
    for (const auto& snap : traj_eff.snapshots) {
        WignerResult w = wigner(snap.state.density_matrix(), grid);
        const std::string name = "fig3_wigner_effective_" + us_tag(snap.t) + ".csv";
        note_truncation(w, name, warnings);
        sink.wigner_map(name, w);
    }

    const auto t90 = time_to_fidelity(traj_eff, 0.9);
    json res;
    res["cavity_rates"] = cavity_rates_json(rates);
    res["effective"] = json{{"final_fidelity", traj_eff.series("fidelity").back()},
                            {"final_parity", traj_eff.series("parity").back()},
                            {"final_purity", traj_eff.series("purity").back()},
                            {"final_n_mean", traj_eff.series("n_mean").back()},
                            {"time_to_0p9_s", optional_time(t90)},
                            {"steps", steps_json(traj_eff)}};
    summary->push_back(line("alpha = %.6g", std::abs(rates.alpha)));
    if (rates.kappa_4ph > 0.0)
        summary->push_back(line("1/kappa_4ph = %.6g us", 1e6 / rates.kappa_4ph));
    summary->push_back(line("effective final fidelity = %.4f, parity = %.6f",
                            traj_eff.series("fidelity").back(),
                            traj_eff.series("parity").back()));
    if (t90) summary->push_back(line("fidelity crosses 0.9 at %.6g us", *t90 * 1e6));

    // Full-model comparison over a shorter window; 0 skips it.
    double window = cfg.simulation.full_window_s;
    if (window < 0.0) window = std::min(t_final, 50e-6);
    if (flags.reduced) window = std::min(window, 5e-6);
    if (window > 0.0) {
        const HilbertSpace space(cdim, cfg.simulation.junction_dim);
        LindbladModel full = make_model(build_hsys_fourier(cfg.device, cfg.pumps, space),
                                        junction_decay(cfg.device, spectrum, space));
        append_cavity_loss(full, cfg.device.kappa_1ph);

        std::vector<Observable> full_obs = {
            cavity_overlap_obs("fidelity", cat, space),
            Observable::purity("purity_full"),
            Observable::parity("parity", space),
            photon_number_obs(space),
            junction_population_obs(space, 1),
            junction_population_obs(space, 2),
        };

        const auto times = linspace(0.0, window, cfg.simulation.samples);
        PropagateOptions fopts = make_options(cfg, flags, full, window, cfg.simulation.samples);
        fopts.sample_times = times;
        Trajectory traj_full = propagate(full, basis_state(space, 0, 0), fopts, full_obs);

        // Three-level effective model on the same grid.  Its gap against the
        // full model isolates the quality of the frame reduction; its gap
        // against the cavity model isolates the junction elimination, which
        // dominates whenever the exchange rate is not far below Gamma_fg.
        const HilbertSpace space3(cdim, 3);
        const ThreeLevelRates r3 = three_level_rates(cfg.pumps, cfg.device, spectrum);
        LindbladModel three = build_three_level_me(co, r3, cfg.device.Gamma_fg_eng, space3);
        append_cavity_loss(three, cfg.device.kappa_1ph);
        std::vector<Observable> three_obs = {
            cavity_overlap_obs("fidelity", cat, space3),
            Observable::purity("purity"),
            junction_population_obs(space3, 2),
        };
        PropagateOptions topts = make_options(cfg, flags, three, window, cfg.simulation.samples);
        topts.sample_times = times;
        Trajectory traj_three = propagate(three, basis_state(space3, 0, 0), topts, three_obs);

        LindbladModel eff2 = build_cavity_me(co, rates, cdim);
        append_cavity_loss(eff2, cfg.device.kappa_1ph);
        PropagateOptions eopts = make_options(cfg, flags, eff2, window, cfg.simulation.samples);
        eopts.sample_times = times;
        Trajectory traj_effw = propagate(eff2, vac, eopts, eff_obs);

        sink.trajectory("fig3_full", traj_full);
        sink.trajectory("fig3_threelevel_window", traj_three);
        sink.trajectory("fig3_effective_window", traj_effw);

        WignerResult w = wigner(cavity_reduced(traj_full.final_state), grid);
        const std::string name = "fig3_wigner_full_" + us_tag(window) + ".csv";
        note_truncation(w, name, warnings);
        sink.wigner_map(name, w);

        const double gap_three = max_series_gap(traj_full, traj_three, "fidelity");
        const double gap_elim = max_series_gap(traj_three, traj_effw, "fidelity");
        const double gap_cavity = max_series_gap(traj_full, traj_effw, "fidelity");
        res["window_comparison"] =
            json{{"window_s", window},
                 {"max_gap_full_vs_three_level", gap_three},
                 {"max_gap_three_level_vs_cavity", gap_elim},
                 {"max_gap_full_vs_cavity", gap_cavity},
                 {"fidelity_full_end", traj_full.series("fidelity").back()},
                 {"fidelity_three_level_end", traj_three.series("fidelity").back()},
                 {"fidelity_cavity_end", traj_effw.series("fidelity").back()},
                 {"max_p_e", *std::max_element(traj_full.series("p_e").begin(),
                                               traj_full.series("p_e").end())},
                 {"max_p_f", *std::max_element(traj_full.series("p_f").begin(),
                                               traj_full.series("p_f").end())},
                 {"full_steps", steps_json(traj_full)}};
        summary->push_back(line("full vs three-level effective over %.3g us: max fidelity gap = %.4f",
                                window * 1e6, gap_three));
        summary->push_back(line("three-level vs eliminated cavity model: max fidelity gap = %.4f",
                                gap_elim));
        summary->push_back(line("full vs eliminated cavity model: max fidelity gap = %.4f",
                                gap_cavity));
    }
    report["results"] = std::move(res);
}

// ------------------------------------------------------------------------ fig4

void run_fig4(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
              std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    const EffectiveCoeffs co0 = effective_coefficients(cfg.device, cfg.pumps);
    report["derived"] = derived_json(cfg, co0, warnings);
    if (std::abs(co0.g_4ph) == 0.0)
        throw InvalidRegime("fig4: four-photon exchange amplitude vanishes for these pumps");

    const NoiseSpectrum spectrum = cfg.spectrum.build(cfg.device);
    const double t_final = cfg.simulation.t_final_s > 0.0 ? cfg.simulation.t_final_s : 150e-6;
    const double threshold = cfg.sweep.fidelity_threshold;

    std::vector<double> targets = cfg.sweep.alpha_sq_targets;
    if (flags.reduced && targets.size() > 1) targets.resize(1);

    const std::vector<double> grid_hz =
        logspace(cfg.sweep.gamma_fg_min_hz, cfg.sweep.gamma_fg_max_hz, cfg.sweep.points);

    json res;
    res["gamma_fg_grid_hz"] = grid_hz;
    res["fidelity_threshold"] = threshold;
    json target_reports = json::array();

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const double alpha_sq = targets[ti];
        const double alpha_t = std::sqrt(alpha_sq);

        // g3 sized so the drive-to-exchange ratio fixes |alpha|^4 = alpha_sq^2.
        PumpConfig pumps = cfg.pumps;
        pumps.xi3.reset();
        pumps.g3 = co0.g_4ph * std::pow(alpha_t, 4.0) / std::sqrt(2.0);
        const EffectiveCoeffs co = effective_coefficients(cfg.device, pumps);
        const ThreeLevelRates tl = three_level_rates(pumps, cfg.device, spectrum);

        const int cdim = cfg.simulation.cavity_dim > 0 ? cfg.simulation.cavity_dim
                                                       : default_cavity_dim(alpha_t);
        const HilbertSpace space(cdim, 3);
        const QuantumState cat = cat_state_mod4(alpha_t, cdim, warnings);
        const Observable overlap = cavity_overlap_obs("fidelity", cat, space);
        const SparseMatrix proj = overlap.op;

        ParameterSweep spec;
        spec.model_factory = [co, tl, space, &cfg](double gamma_fg) {
            LindbladModel m = build_three_level_me(co, tl, gamma_fg, space);
            append_cavity_loss(m, cfg.device.kappa_1ph);
            return m;
        };
        for (double hz : grid_hz) spec.parameters.push_back(hz * two_pi);
        spec.initial = basis_state(space, 0, 0);
        spec.observables = {overlap, Observable::parity("parity", space),
                            junction_population_obs(space, 1),
                            junction_population_obs(space, 2)};
        LindbladModel probe = spec.model_factory(spec.parameters.front());
        spec.options = make_options(cfg, flags, probe, t_final, cfg.simulation.samples);
        const double cutoff = std::min(0.98, threshold + 0.05);
        spec.options.stop_when = [proj, cutoff](double, const QuantumState& s) {
            const cd f = s.density ? (proj * s.rho).eval().trace()
                                   : s.psi.dot(proj * s.psi);
            return f.real() >= cutoff;
        };

        std::vector<SweepRow> rows = sweep(spec);

        SweepTable table;
        table.columns = {"gamma_fg_hz", "reached", "t_to_threshold_s", "final_fidelity"};
        SweepTable surface;
        surface.columns = {"gamma_fg_hz", "t_s", "fidelity"};

        json points = json::array();
        double best_t = 0.0, best_hz = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            table.errors.push_back(row.error);
            if (!row.error.empty()) {
                warnings->push_back(line("fig4 alpha_sq=%g gamma_fg=%g Hz: ", alpha_sq,
                                         grid_hz[i]) +
                                    row.error);
                table.rows.push_back({grid_hz[i], 0.0, std::nan(""), std::nan("")});
                points.push_back(json{{"gamma_fg_hz", grid_hz[i]}, {"error", row.error}});
                continue;
            }
            const auto t90 = time_to_fidelity(row.trajectory, threshold);
            const double final_f = row.trajectory.series("fidelity").back();
            table.rows.push_back({grid_hz[i], t90 ? 1.0 : 0.0, t90 ? *t90 : std::nan(""),
                                  final_f});
            const auto& f = row.trajectory.series("fidelity");
            for (std::size_t k = 0; k < row.trajectory.times.size(); ++k)
                surface.rows.push_back({grid_hz[i], row.trajectory.times[k], f[k]});
            surface.errors.insert(surface.errors.end(), row.trajectory.times.size(),
                                  std::string());
            points.push_back(json{{"gamma_fg_hz", grid_hz[i]},
                                  {"t_to_threshold_s", optional_time(t90)},
                                  {"final_fidelity", final_f},
                                  {"steps", steps_json(row.trajectory)}});
            if (t90 && (!any || *t90 < best_t)) {
                any = true;
                best_t = *t90;
                best_hz = grid_hz[i];
            }
        }
        sink.table(line("fig4_sweep_alpha%g.csv", alpha_sq), table);
        sink.table(line("fig4_surface_alpha%g.csv", alpha_sq), surface);

        json tr;
        tr["alpha_sq"] = alpha_sq;
        tr["g3"] = cqty(pumps.g3);
        tr["cavity_dim"] = cdim;
        tr["points"] = std::move(points);
        if (any) {
            tr["optimal_gamma_fg_hz"] = best_hz;
            tr["optimal_time_s"] = best_t;
            summary->push_back(line("alpha^2 = %g: fastest convergence at gamma_fg = %.4g MHz "
                                    "(t = %.4g us)",
                                    alpha_sq, best_hz / 1e6, best_t * 1e6));
        } else {
            summary->push_back(
                line("alpha^2 = %g: threshold %.2f never reached on the grid", alpha_sq,
                     threshold));
        }

        // Ladder-resolved vs cavity-only comparison at selected rates, first
        // target only: the cavity-only model needs the same pumps.
        if (ti == 0 && !cfg.sweep.compare_gamma_fg_hz.empty()) {
            json compares = json::array();
            for (double chz : cfg.sweep.compare_gamma_fg_hz) {
                const double gfg = chz * two_pi;
                LindbladModel be = build_three_level_me(co, tl, gfg, space);
                append_cavity_loss(be, cfg.device.kappa_1ph);
                PropagateOptions bopts =
                    make_options(cfg, flags, be, t_final, cfg.simulation.samples);
                Trajectory traj_be = propagate(be, basis_state(space, 0, 0), bopts,
                                               {overlap, Observable::parity("parity", space)});

                DeviceParams dev2 = cfg.device;
                dev2.Gamma_fg_eng = gfg;
                const CavityRates cr = cavity_rates(co, pumps, dev2, spectrum);
                LindbladModel ae = build_cavity_me(co, cr, cdim);
                append_cavity_loss(ae, cfg.device.kappa_1ph);
                const HilbertSpace cspace = cavity_space(cdim);
                PropagateOptions aopts =
                    make_options(cfg, flags, ae, t_final, cfg.simulation.samples);
                aopts.sample_times = bopts.sample_times;
                aopts.sample_interval = bopts.sample_interval;
                Trajectory traj_ae =
                    propagate(ae, basis_state(cspace, 0, 0), aopts,
                              {Observable::fidelity("fidelity", cat),
                               Observable::parity("parity", cspace)});

                sink.trajectory(line("fig4_compare_gfg%.4gMHz_ladder", chz / 1e6), traj_be);
                sink.trajectory(line("fig4_compare_gfg%.4gMHz_cavity", chz / 1e6), traj_ae);

                const double gap = max_series_gap(traj_be, traj_ae, "fidelity");
                const auto be_t = time_to_fidelity(traj_be, threshold);
                const auto ae_t = time_to_fidelity(traj_ae, threshold);
                compares.push_back(json{{"gamma_fg_hz", chz},
                                        {"max_fidelity_gap", gap},
                                        {"ladder_t_to_threshold_s", optional_time(be_t)},
                                        {"cavity_t_to_threshold_s", optional_time(ae_t)},
                                        {"ladder_final_fidelity",
                                         traj_be.series("fidelity").back()}});
                summary->push_back(line("compare at gamma_fg = %.4g MHz: max gap = %.4f",
                                        chz / 1e6, gap));
            }
            tr["compare"] = std::move(compares);
        }
        target_reports.push_back(std::move(tr));
    }
    res["targets"] = std::move(target_reports);
    report["results"] = std::move(res);
}

// ---------------------------------------------------------------- error-budget

void run_error_budget(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
                      std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    (void)flags;
    double kappa_2ph = 0.0;
    if (cfg.budget.kappa_2ph_override_hz >= 0.0) {
        kappa_2ph = cfg.budget.kappa_2ph_override_hz * two_pi;
        report["derived"] = json::object();
    } else {
        const EffectiveCoeffs co = effective_coefficients(cfg.device, cfg.pumps);
        report["derived"] = derived_json(cfg, co, warnings);
        const CavityRates rates =
            cavity_rates(co, cfg.pumps, cfg.device, cfg.spectrum.build(cfg.device));
        kappa_2ph = rates.kappa_2ph;
    }

    const double alpha_abs = cfg.simulation.alpha_target;
    SweepTable table;
    table.columns = {"kappa_1ph_hz", "dt_s", "p1", "p2", "p2_over_p1",
                     "two_photon_subdominant", "below_percent_of_single"};
    json rows = json::array();
    for (double k1_hz : cfg.budget.kappa_1ph_grid_hz) {
        for (double dt : cfg.budget.dt_grid_s) {
            const ErrorBudget b = error_budget(k1_hz * two_pi, kappa_2ph, alpha_abs, dt);
            table.rows.push_back({k1_hz, dt, b.p1, b.p2, b.ratio,
                                  b.two_photon_subdominant ? 1.0 : 0.0,
                                  b.below_percent_of_single ? 1.0 : 0.0});
            table.errors.emplace_back();
            rows.push_back(json{{"kappa_1ph_hz", k1_hz},
                                {"dt_s", dt},
                                {"p1", b.p1},
                                {"p2", b.p2},
                                {"p2_over_p1", b.ratio},
                                {"two_photon_subdominant", b.two_photon_subdominant},
                                {"below_percent_of_single", b.below_percent_of_single}});
        }
    }
    sink.table("error_budget.csv", table);

    report["results"] = json{{"kappa_2ph", rate_qty(kappa_2ph)},
                             {"alpha_abs", alpha_abs},
                             {"rows", std::move(rows)}};
    summary->push_back(line("kappa_2ph/2pi = %.6g Hz", kappa_2ph / two_pi));
    if (!table.rows.empty())
        summary->push_back(line("first row: p1 = %.4g, p2 = %.4g, p2/p1 = %.4g",
                                table.rows.front()[2], table.rows.front()[3],
                                table.rows.front()[4]));
}

// ---------------------------------------------------------------------- custom

void run_custom(const ScenarioConfig& cfg, const RunFlags& flags, Sink& sink, json& report,
                std::vector<std::string>* warnings, std::vector<std::string>* summary) {
    if (cfg.simulation.t_final_s <= 0.0)
        throw ConfigError("simulation.t_final_s: required for the custom scenario");

    const EffectiveCoeffs co = effective_coefficients(cfg.device, cfg.pumps);
    report["derived"] = derived_json(cfg, co, warnings);
    const NoiseSpectrum spectrum = cfg.spectrum.build(cfg.device);

    cd alpha_ref(cfg.simulation.alpha_target, 0.0);
    std::optional<CavityRates> rates;
    try {
        rates = cavity_rates(co, cfg.pumps, cfg.device, spectrum);
        alpha_ref = rates->alpha;
    } catch (const std::exception& e) {
        warnings->push_back(std::string("cavity rates unavailable, fidelity target uses "
                                        "alpha_target: ") +
                            e.what());
    }

    const int cdim = cfg.simulation.cavity_dim > 0 ? cfg.simulation.cavity_dim
                                                   : default_cavity_dim(std::abs(alpha_ref));
    HilbertSpace space;
    LindbladModel model;
    if (cfg.custom.model == "cavity") {
        if (!rates)
            throw InvalidRegime("custom: cavity model needs the engineered rates");
        space = cavity_space(cdim);
        model = build_cavity_me(co, *rates, cdim);
    } else if (cfg.custom.model == "three-level") {
        space = HilbertSpace(cdim, 3);
        model = build_three_level_me(co, three_level_rates(cfg.pumps, cfg.device, spectrum),
                                     cfg.device.Gamma_fg_eng, space);
    } else {
        space = HilbertSpace(cdim, cfg.simulation.junction_dim);
        model = make_model(build_hsys_fourier(cfg.device, cfg.pumps, space),
                           junction_decay(cfg.device, spectrum, space));
    }
    append_cavity_loss(model, cfg.device.kappa_1ph);

    const bool has_junction = space.junction_dim > 1;
    QuantumState initial = basis_state(space, 0, 0);
    if (cfg.custom.initial == "f0") {
        if (!has_junction) throw ConfigError("custom.initial: f0 requires a junction model");
        initial = basis_state(space, 2, 0);
    } else if (cfg.custom.initial == "coherent" || cfg.custom.initial == "cat4") {
        const QuantumState cav =
            cfg.custom.initial == "coherent"
                ? coherent_state(cfg.custom.initial_alpha, cdim, warnings)
                : cat_state_mod4(cfg.custom.initial_alpha, cdim, warnings);
        Vector v = Vector::Zero(space.dim());
        v.segment(0, cdim) = cav.psi;  // junction ground-state block comes first
        initial = QuantumState::pure(space, std::move(v));
    }

    const QuantumState cat = cat_state_mod4(alpha_ref, cdim, warnings);
    std::vector<Observable> obs;
    if (has_junction)
        obs.push_back(cavity_overlap_obs("fidelity", cat, space));
    else
        obs.push_back(Observable::fidelity("fidelity", cat));
    obs.push_back(Observable::purity("purity"));
    obs.push_back(Observable::parity("parity", space));
    obs.push_back(photon_number_obs(space));
    if (has_junction) {
        obs.push_back(junction_population_obs(space, 1));
        obs.push_back(junction_population_obs(space, 2));
    }

    PropagateOptions opts =
        make_options(cfg, flags, model, cfg.simulation.t_final_s, cfg.simulation.samples);
    opts.snapshot_times = cfg.output.snapshot_times_s;
    Trajectory traj = propagate(model, initial, opts, obs);
    sink.trajectory("custom", traj);

    const auto grid = wigner_square_grid(cfg.output.wigner.range, cfg.output.wigner.points);
    for (const auto& snap : traj.snapshots) {
        WignerResult w = wigner(cavity_reduced(snap.state), grid);
        const std::string name = "custom_wigner_" + us_tag(snap.t) + ".csv";
        note_truncation(w, name, warnings);
        sink.wigner_map(name, w);
    }
    WignerResult wf = wigner(cavity_reduced(traj.final_state), grid);
    note_truncation(wf, "custom_wigner_final.csv", warnings);
    sink.wigner_map("custom_wigner_final.csv", wf);

    json res;
    res["model"] = cfg.custom.model;
    res["alpha_ref"] = alpha_json(alpha_ref);
    res["final"] = json{{"fidelity", traj.series("fidelity").back()},
                        {"purity", traj.series("purity").back()},
                        {"parity", traj.series("parity").back()},
                        {"n_mean", traj.series("n_mean").back()}};
    res["time_to_0p9_s"] = optional_time(time_to_fidelity(traj, 0.9));
    res["steps"] = steps_json(traj);
    if (rates) res["cavity_rates"] = cavity_rates_json(*rates);
    report["results"] = std::move(res);

    summary->push_back(line("final fidelity = %.4f, parity = %.6f, n = %.4f",
                            traj.series("fidelity").back(), traj.series("parity").back(),
                            traj.series("n_mean").back()));
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, const RunFlags& flags) {
    const auto t_start = std::chrono::steady_clock::now();

    Sink sink;
    sink.dir = flags.out_dir.empty() ? cfg.output.directory : flags.out_dir;
    sink.csv = cfg.output.csv;
    sink.js = cfg.output.json;
    fs::create_directories(sink.dir);

    json report;
    report["schema_version"] = 1;
    report["scenario"] = cfg.scenario;
    report["flags"] = json{{"reduced", flags.reduced}, {"fixed_step", flags.fixed_step}};
    report["resolved_config"] = json::parse(resolved_config_json(cfg));

    std::vector<std::string> warnings = cfg.warnings;
    std::vector<std::string> summary;

    if (cfg.scenario == "derive-params")
        run_derive(cfg, flags, sink, report, &warnings, &summary);
    else if (cfg.scenario == "fig2")
        run_fig2(cfg, flags, sink, report, &warnings, &summary);
    else if (cfg.scenario == "fig3")
        run_fig3(cfg, flags, sink, report, &warnings, &summary);
    else if (cfg.scenario == "fig4")
        run_fig4(cfg, flags, sink, report, &warnings, &summary);
    else if (cfg.scenario == "error-budget")
        run_error_budget(cfg, flags, sink, report, &warnings, &summary);
    else if (cfg.scenario == "custom")
        run_custom(cfg, flags, sink, report, &warnings, &summary);
    else
        throw ConfigError("unknown scenario: " + cfg.scenario);

    report["warnings"] = warnings;
    if (!flags.fixed_step) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        report["timing"] = json{{"wall_seconds", secs}};
    }

    std::string report_path;
    if (cfg.output.json) report_path = sink.claim("report.json");
    report["files"] = sink.files;

    RunReport out;
    out.report_json = report.dump(2) + "\n";
    out.files = sink.files;
    out.summary = std::move(summary);
    if (!report_path.empty()) write_text_file(out.report_json, report_path);
    return out;
}

} // namespace cascade
