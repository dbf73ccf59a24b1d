#include "cascade/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cascade/errors.hpp"
#include "cascade/rwa.hpp"

namespace cascade {

namespace {

using nlohmann::json;

// Marks every key it hands out; done() rejects whatever was never requested,
// so misspelled keys fail before any computation starts.
class Strict {
public:
    Strict(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json* take(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double number(const char* key, double dflt) {
        const json* v = take(key);
        if (!v) return dflt;
        if (!v->is_number()) throw ConfigError(at(key) + ": expected a number");
        return v->get<double>();
    }

    int integer(const char* key, int dflt) {
        const json* v = take(key);
        if (!v) return dflt;
        if (!v->is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
        return v->get<int>();
    }

    bool boolean(const char* key, bool dflt) {
        const json* v = take(key);
        if (!v) return dflt;
        if (!v->is_boolean()) throw ConfigError(at(key) + ": expected true or false");
        return v->get<bool>();
    }

    std::string text(const char* key, std::string dflt) {
        const json* v = take(key);
        if (!v) return dflt;
        if (!v->is_string()) throw ConfigError(at(key) + ": expected a string");
        return v->get<std::string>();
    }

    std::vector<double> number_list(const char* key, std::vector<double> dflt) {
        const json* v = take(key);
        if (!v) return dflt;
        if (!v->is_array()) throw ConfigError(at(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : *v) {
            if (!e.is_number()) throw ConfigError(at(key) + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    // A complex value is a plain number or a [re, im] pair.
    cd complex_number(const char* key, cd dflt, bool* present = nullptr) {
        const json* v = take(key);
        if (present) *present = v != nullptr;
        if (!v) return dflt;
        if (v->is_number()) return cd(v->get<double>(), 0.0);
        if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number())
            return cd((*v)[0].get<double>(), (*v)[1].get<double>());
        throw ConfigError(at(key) + ": expected a number or a [re, im] pair");
    }

    json section(const char* key) {
        const json* v = take(key);
        if (!v) return json::object();
        if (!v->is_object()) throw ConfigError(at(key) + ": expected an object");
        return *v;
    }

    void done() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
    }

private:
    std::string at(const char* key) const { return path_ + "." + key; }

    json j_;
    std::string path_;
    std::set<std::string> seen_;
};

double hz(double value) { return value * two_pi; }
double to_hz(double value) { return value / two_pi; }
cd hz(cd value) { return value * two_pi; }

json complex_hz_json(cd rad) {
    const cd v = rad / two_pi;
    if (v.imag() == 0.0) return json(v.real());
    return json::array({v.real(), v.imag()});
}

}  // namespace

NoiseSpectrum SpectrumConfig::build(const DeviceParams& device) const {
    if (preset == "white" || preset == "engineered")
        return NoiseSpectrum::white(device.Gamma_1);
    if (preset == "bandpass")
        return NoiseSpectrum::bandpass(hz(center_offset_hz), hz(halfwidth_hz), hz(gamma_in_hz),
                                       hz(gamma_out_hz));
    throw ConfigError("spectrum.preset: unknown preset '" + preset + "'");
}

ScenarioConfig load_config(const std::string& path, const std::string& scenario_from_cli) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }

    ScenarioConfig cfg;
    Strict top(root, "config");
    cfg.schema_version = top.integer("schema_version", 0);
    if (cfg.schema_version != 1)
        throw ConfigError("schema_version: expected 1, got " +
                          std::to_string(cfg.schema_version));
    const std::string file_scenario = top.text("scenario", "");
    if (!file_scenario.empty() && file_scenario != scenario_from_cli)
        throw ConfigError("scenario: file says '" + file_scenario + "' but the command is '" +
                          scenario_from_cli + "'");
    cfg.scenario = scenario_from_cli;

    {
        Strict d(top.section("device"), "device");
        cfg.device = DeviceParams::from_hz(
            d.number("chi_aa_hz", 0.0), d.number("chi_bb_hz", 0.0), d.number("chi_ab_hz", 0.0),
            d.number("raman_detuning_hz", 0.0), d.number("compensation_detuning_hz", 0.0),
            d.number("gamma_1_hz", 0.0), d.number("gamma_fg_eng_hz", 0.0),
            d.number("kappa_1ph_hz", 0.0));
        d.done();
    }
    {
        Strict p(top.section("pumps"), "pumps");
        cfg.solve_g1_delta = p.boolean("solve_g1_delta", false);
        bool has_g1 = false;
        cfg.pumps.g1 = hz(p.complex_number("g1_hz", cd(0.0), &has_g1));
        cfg.pumps.g2 = hz(p.complex_number("g2_hz", cd(0.0)));
        cfg.pumps.g3 = hz(p.complex_number("g3_hz", cd(0.0)));
        bool has_xi1 = false, has_xi2 = false, has_xi3 = false;
        const cd xi1 = p.complex_number("xi1", cd(0.0), &has_xi1);
        const cd xi2 = p.complex_number("xi2", cd(0.0), &has_xi2);
        const cd xi3 = p.complex_number("xi3", cd(0.0), &has_xi3);
        if (has_xi1 || has_xi2 || has_xi3) {
            cfg.pumps.xi1 = xi1;
            cfg.pumps.xi2 = xi2;
            cfg.pumps.xi3 = xi3;
        }
        if (cfg.solve_g1_delta && has_g1)
            throw ConfigError("pumps.g1_hz: remove it or disable solve_g1_delta");
        p.done();
    }
    {
        Strict s(top.section("spectrum"), "spectrum");
        cfg.spectrum.preset = s.text("preset", "white");
        cfg.spectrum.center_offset_hz = s.number("center_offset_hz", 0.0);
        cfg.spectrum.halfwidth_hz = s.number("halfwidth_hz", 0.0);
        cfg.spectrum.gamma_in_hz = s.number("gamma_in_hz", 0.0);
        cfg.spectrum.gamma_out_hz = s.number("gamma_out_hz", 0.0);
        s.done();
        if (cfg.spectrum.preset != "white" && cfg.spectrum.preset != "engineered" &&
            cfg.spectrum.preset != "bandpass")
            throw ConfigError("spectrum.preset: unknown preset '" + cfg.spectrum.preset + "'");
    }
    {
        Strict s(top.section("simulation"), "simulation");
        cfg.simulation.t_final_s = s.number("t_final_s", 0.0);
        cfg.simulation.full_window_s = s.number("full_window_s", -1.0);
        cfg.simulation.samples = s.integer("samples", 200);
        cfg.simulation.rtol = s.number("rtol", 1e-8);
        cfg.simulation.atol = s.number("atol", 1e-10);
        cfg.simulation.fixed_dt_s = s.number("fixed_dt_s", 0.0);
        cfg.simulation.cavity_dim = s.integer("cavity_dim", 0);
        cfg.simulation.junction_dim = s.integer("junction_dim", 3);
        cfg.simulation.alpha_target = s.number("alpha_target", 2.0);
        s.done();
        if (cfg.simulation.samples < 1) throw ConfigError("simulation.samples: must be >= 1");
        if (cfg.simulation.junction_dim != 3 && cfg.simulation.junction_dim != 4)
            throw ConfigError("simulation.junction_dim: must be 3 or 4");
    }
    {
        Strict o(top.section("output"), "output");
        cfg.output.directory = o.text("directory", ".");
        if (const auto* fmts = o.take("formats")) {
            if (!fmts->is_array()) throw ConfigError("output.formats: expected an array");
            cfg.output.csv = false;
            cfg.output.json = false;
            for (const auto& f : *fmts) {
                const std::string name = f.is_string() ? f.get<std::string>() : "";
                if (name == "csv")
                    cfg.output.csv = true;
                else if (name == "json")
                    cfg.output.json = true;
                else
                    throw ConfigError("output.formats: unknown format");
            }
        }
        Strict w(o.section("wigner_grid"), "output.wigner_grid");
        cfg.output.wigner.range = w.number("range", 3.5);
        cfg.output.wigner.points = w.integer("points", 41);
        w.done();
        cfg.output.snapshot_times_s = o.number_list("snapshot_times_s", {});
        o.done();
        if (cfg.output.wigner.points < 2) throw ConfigError("output.wigner_grid.points: must be >= 2");
    }
    {
        Strict s(top.section("sweep"), "sweep");
        cfg.sweep.gamma_fg_min_hz = s.number("gamma_fg_min_hz", 1e5);
        cfg.sweep.gamma_fg_max_hz = s.number("gamma_fg_max_hz", 1e7);
        cfg.sweep.points = s.integer("points", 5);
        cfg.sweep.alpha_sq_targets = s.number_list("alpha_sq_targets", {4.0});
        cfg.sweep.fidelity_threshold = s.number("fidelity_threshold", 0.9);
        cfg.sweep.compare_gamma_fg_hz = s.number_list("compare_gamma_fg_hz", {6e5, 6e6});
        s.done();
        if (cfg.sweep.points < 2) throw ConfigError("sweep.points: must be >= 2");
        if (cfg.sweep.gamma_fg_min_hz <= 0.0 ||
            cfg.sweep.gamma_fg_max_hz <= cfg.sweep.gamma_fg_min_hz)
            throw ConfigError("sweep: need 0 < gamma_fg_min_hz < gamma_fg_max_hz");
    }
    {
        Strict b(top.section("error_budget"), "error_budget");
        cfg.budget.dt_grid_s = b.number_list("dt_grid_s", {1e-6});
        cfg.budget.kappa_1ph_grid_hz = b.number_list("kappa_1ph_grid_hz", {100.0});
        cfg.budget.kappa_2ph_override_hz = b.number("kappa_2ph_override_hz", -1.0);
        b.done();
    }
    {
        Strict c(top.section("custom"), "custom");
        cfg.custom.model = c.text("model", "cavity");
        cfg.custom.initial = c.text("initial", "vacuum");
        cfg.custom.initial_alpha = c.complex_number("initial_alpha", cd(0.0));
        c.done();
        if (cfg.custom.model != "full" && cfg.custom.model != "three-level" &&
            cfg.custom.model != "cavity")
            throw ConfigError("custom.model: expected full, three-level, or cavity");
        if (cfg.custom.initial != "vacuum" && cfg.custom.initial != "f0" &&
            cfg.custom.initial != "coherent" && cfg.custom.initial != "cat4")
            throw ConfigError("custom.initial: expected vacuum, f0, coherent, or cat4");
    }
    top.done();

    try {
        if (cfg.solve_g1_delta) {
            const ConstraintSolution sol = solve_constraints(cfg.device, std::abs(cfg.pumps.g2));
            cfg.pumps.g1 = sol.g1;
            cfg.device.delta = sol.delta;
        }
        cfg.device.validate(&cfg.warnings);
        cfg.pumps.validate(cfg.device);
        cfg.spectrum.build(cfg.device).validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid parameters: ") + e.what());
    }
    return cfg;
}

std::string resolved_config_json(const ScenarioConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["scenario"] = cfg.scenario;
    j["device"] = {{"chi_aa_hz", to_hz(cfg.device.chi_aa)},
                   {"chi_bb_hz", to_hz(cfg.device.chi_bb)},
                   {"chi_ab_hz", to_hz(cfg.device.chi_ab)},
                   {"raman_detuning_hz", to_hz(cfg.device.Delta)},
                   {"compensation_detuning_hz", to_hz(cfg.device.delta)},
                   {"gamma_1_hz", to_hz(cfg.device.Gamma_1)},
                   {"gamma_fg_eng_hz", to_hz(cfg.device.Gamma_fg_eng)},
                   {"kappa_1ph_hz", to_hz(cfg.device.kappa_1ph)}};
    json pumps = {{"solve_g1_delta", cfg.solve_g1_delta},
                  {"g1_hz", complex_hz_json(cfg.pumps.g1)},
                  {"g2_hz", complex_hz_json(cfg.pumps.g2)},
                  {"g3_hz", complex_hz_json(cfg.pumps.g3)}};
    if (cfg.pumps.xi1) {
        pumps["xi1"] = json::array({cfg.pumps.xi1->real(), cfg.pumps.xi1->imag()});
        pumps["xi2"] = json::array({cfg.pumps.xi2->real(), cfg.pumps.xi2->imag()});
        pumps["xi3"] = json::array({cfg.pumps.xi3->real(), cfg.pumps.xi3->imag()});
    }
    j["pumps"] = pumps;
    j["spectrum"] = {{"preset", cfg.spectrum.preset},
                     {"center_offset_hz", cfg.spectrum.center_offset_hz},
                     {"halfwidth_hz", cfg.spectrum.halfwidth_hz},
                     {"gamma_in_hz", cfg.spectrum.gamma_in_hz},
                     {"gamma_out_hz", cfg.spectrum.gamma_out_hz}};
    j["simulation"] = {{"t_final_s", cfg.simulation.t_final_s},
                       {"full_window_s", cfg.simulation.full_window_s},
                       {"samples", cfg.simulation.samples},
                       {"rtol", cfg.simulation.rtol},
                       {"atol", cfg.simulation.atol},
                       {"fixed_dt_s", cfg.simulation.fixed_dt_s},
                       {"cavity_dim", cfg.simulation.cavity_dim},
                       {"junction_dim", cfg.simulation.junction_dim},
                       {"alpha_target", cfg.simulation.alpha_target}};
    json formats = json::array();
    if (cfg.output.csv) formats.push_back("csv");
    if (cfg.output.json) formats.push_back("json");
    j["output"] = {{"directory", cfg.output.directory},
                   {"formats", formats},
                   {"wigner_grid",
                    {{"range", cfg.output.wigner.range}, {"points", cfg.output.wigner.points}}},
                   {"snapshot_times_s", cfg.output.snapshot_times_s}};
    j["sweep"] = {{"gamma_fg_min_hz", cfg.sweep.gamma_fg_min_hz},
                  {"gamma_fg_max_hz", cfg.sweep.gamma_fg_max_hz},
                  {"points", cfg.sweep.points},
                  {"alpha_sq_targets", cfg.sweep.alpha_sq_targets},
                  {"fidelity_threshold", cfg.sweep.fidelity_threshold},
                  {"compare_gamma_fg_hz", cfg.sweep.compare_gamma_fg_hz}};
    j["error_budget"] = {{"dt_grid_s", cfg.budget.dt_grid_s},
                         {"kappa_1ph_grid_hz", cfg.budget.kappa_1ph_grid_hz},
                         {"kappa_2ph_override_hz", cfg.budget.kappa_2ph_override_hz}};
    j["custom"] = {{"model", cfg.custom.model},
                   {"initial", cfg.custom.initial},
                   {"initial_alpha",
                    json::array({cfg.custom.initial_alpha.real(), cfg.custom.initial_alpha.imag()})}};
    return j.dump(2) + "\n";
}

} // namespace cascade
