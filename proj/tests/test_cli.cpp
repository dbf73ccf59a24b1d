#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#ifndef CASCADE_BIN
#error "CASCADE_BIN must point at the command-line binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "cascade_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_config(const std::string& name, const json& body) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << body.dump(2);
    return p.string();
}

// Runs the binary through the shell, captures both streams, returns the exit
// code (-1 when the process did not exit normally).
int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
    const fs::path so = scratch_dir() / "last_stdout.txt";
    const fs::path se = scratch_dir() / "last_stderr.txt";
    const std::string cmd =
        std::string(CASCADE_BIN) + " " + args + " > " + so.string() + " 2> " + se.string();
    const int raw = std::system(cmd.c_str());
    if (out) *out = slurp(so);
    if (err) *err = slurp(se);
    if (raw == -1 || !WIFEXITED(raw)) return -1;
    return WEXITSTATUS(raw);
}

json nominal_device() {
    return {{"chi_aa_hz", 312.0},
            {"chi_bb_hz", 200e6},
            {"chi_ab_hz", 0.5e6},
            {"raman_detuning_hz", 50e6},
            {"compensation_detuning_hz", -153537.6},
            {"gamma_1_hz", 2e6}};
}

json nominal_pumps() {
    return {{"g1_hz", 898776.9467448528}, {"g2_hz", 2e6}, {"g3_hz", 460e3}};
}

json report_at(const fs::path& out_dir) {
    const std::string text = slurp(out_dir / "report.json");
    REQUIRE(!text.empty());
    return json::parse(text);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("--help exits cleanly and documents the thread cap") {
    std::string out;
    CHECK(run_cli("--help", &out) == 0);
    CHECK(out.find("CASCADE_THREADS") != std::string::npos);
    CHECK(out.find("derive-params") != std::string::npos);
    CHECK(out.find("fig4") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    SUBCASE("no subcommand") { CHECK(run_cli("") == 2); }
    SUBCASE("missing required --config") { CHECK(run_cli("derive-params") == 2); }
    SUBCASE("config path does not exist") {
        std::string err;
        CHECK(run_cli("derive-params --config " + (scratch_dir() / "absent.json").string(),
                      nullptr, &err) == 2);
        CHECK(!err.empty());
    }
}

TEST_CASE("config errors exit 2 and name the offender") {
    const std::string path =
        write_config("bad_key.json", {{"schema_version", 1}, {"devicee", json::object()}});
    std::string err;
    CHECK(run_cli("derive-params --config " + path, nullptr, &err) == 2);
    CHECK(err.find("config error:") != std::string::npos);
    CHECK(err.find("devicee") != std::string::npos);
}

TEST_CASE("derive-params reports the resolved quantities") {
    const json cfg = {{"schema_version", 1},
                      {"device", nominal_device()},
                      {"pumps", nominal_pumps()}};
    const std::string path = write_config("derive.json", cfg);
    const fs::path out_dir = scratch_dir() / "derive_out";

    std::string out;
    REQUIRE(run_cli("derive-params --config " + path + " --out " + out_dir.string(), &out) == 0);
    CHECK(out.find("g1/2pi") != std::string::npos);
    CHECK(out.find("wrote ") != std::string::npos);

    const json r = report_at(out_dir);
    CHECK(r["scenario"] == "derive-params");
    CHECK(r["derived"]["g1"]["abs_hz"].get<double>() ==
          doctest::Approx(898776.9467448528).epsilon(1e-9));
    CHECK(r["derived"]["g_4ph"]["abs_hz"].get<double>() ==
          doctest::Approx(40674.00152431526).epsilon(1e-9));
    CHECK(r["derived"]["eps_4ph"]["abs_hz"].get<double>() ==
          doctest::Approx(650538.2386916238).epsilon(1e-9));
    CHECK(r["results"]["alpha_target"]["abs"].get<double>() ==
          doctest::Approx(1.9998111351030714).epsilon(1e-9));
    CHECK(r["results"]["exchange"]["rabi_half_period_s"].get<double>() ==
          doctest::Approx(1.254635255827389e-6).epsilon(1e-9));
    CHECK(r["results"]["cavity_rates"]["kappa_4ph"]["inverse_s"].get<double>() ==
          doctest::Approx(96.20249388040297e-6).epsilon(1e-9));
    CHECK(r["results"]["cavity_rates"]["kappa_2ph"]["inverse_s"].get<double>() ==
          doctest::Approx(205.56280105896795e-6).epsilon(1e-9));
    // The echoed configuration is embedded for provenance (unit round-trip
    // through rad/s costs at most an ulp).
    CHECK(r["resolved_config"]["device"]["chi_bb_hz"].get<double>() ==
          doctest::Approx(200e6).epsilon(1e-12));
}

TEST_CASE("error-budget honors the two-photon override") {
    json cfg = {{"schema_version", 1},
                {"device", nominal_device()},
                {"pumps", nominal_pumps()},
                {"error_budget",
                 {{"dt_grid_s", {1e-6, 1e-5}},
                  {"kappa_1ph_grid_hz", {100.0, 1000.0}},
                  {"kappa_2ph_override_hz", 0.0}}}};
    const std::string path = write_config("budget.json", cfg);
    const fs::path out_dir = scratch_dir() / "budget_out";

    REQUIRE(run_cli("error-budget --config " + path + " --out " + out_dir.string()) == 0);
    const json r = report_at(out_dir);
    REQUIRE(r["results"]["rows"].size() == 4);
    for (const auto& row : r["results"]["rows"]) {
        CHECK(row["p2"].get<double>() == 0.0);
        CHECK(row["p2_over_p1"].get<double>() == 0.0);
        CHECK(row["p1"].get<double>() > 0.0);
    }
    CHECK(fs::exists(out_dir / "error_budget.csv"));
}

TEST_CASE("custom scenario runs and fixed-step reruns are byte-identical") {
    json cfg = {{"schema_version", 1},
                {"device", nominal_device()},
                {"pumps", nominal_pumps()},
                {"simulation",
                 {{"t_final_s", 0.2e-6},
                  {"samples", 20},
                  {"cavity_dim", 16},
                  {"fixed_dt_s", 1e-9}}},
                {"output", {{"wigner_grid", {{"range", 2.5}, {"points", 9}}}}},
                {"custom", {{"model", "cavity"}, {"initial", "vacuum"}}}};
    cfg["device"]["gamma_fg_eng_hz"] = 4e6;
    const std::string path = write_config("custom.json", cfg);
    const fs::path out_a = scratch_dir() / "custom_a";
    const fs::path out_b = scratch_dir() / "custom_b";

    std::string out;
    REQUIRE(run_cli("custom --config " + path + " --fixed-step --out " + out_a.string(), &out) ==
            0);
    CHECK(out.find("final fidelity") != std::string::npos);
    REQUIRE(run_cli("custom --config " + path + " --fixed-step --out " + out_b.string()) == 0);

    const std::string traj_a = slurp(out_a / "custom.csv");
    CHECK(!traj_a.empty());
    CHECK(traj_a == slurp(out_b / "custom.csv"));
    CHECK(slurp(out_a / "custom_wigner_final.csv") == slurp(out_b / "custom_wigner_final.csv"));

    const json r = report_at(out_a);
    CHECK(r["results"]["final"]["parity"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r["results"]["steps"]["rejected"] == 0);
    CHECK(!r.contains("timing"));  // wall time would break reproducibility
}

TEST_CASE("fig2 smoke run at a small problem size") {
    json cfg = {{"schema_version", 1},
                {"device", nominal_device()},
                {"pumps", nominal_pumps()},
                {"simulation",
                 {{"t_final_s", 0.4e-6}, {"samples", 20}, {"cavity_dim", 8}, {"rtol", 1e-7}}}};
    const std::string path = write_config("fig2.json", cfg);
    const fs::path out_dir = scratch_dir() / "fig2_out";

    std::string out;
    REQUIRE(run_cli("fig2 --config " + path + " --out " + out_dir.string(), &out) == 0);
    CHECK(out.find("predicted half period") != std::string::npos);

    const json r = report_at(out_dir);
    CHECK(r["results"]["half_period_predicted_s"].get<double>() ==
          doctest::Approx(1.254635255827389e-6).epsilon(1e-9));
    const double peak = r["results"]["peak_p_g4_full"].get<double>();
    CHECK(peak > 0.0);
    CHECK(peak <= 1.0);
    CHECK(fs::exists(out_dir / "fig2_effective.csv"));
    CHECK(fs::exists(out_dir / "fig2_full.csv"));
}

TEST_CASE("fig3 --reduced smoke run compares the model tiers") {
    json cfg = {{"schema_version", 1},
                {"device", nominal_device()},
                {"pumps", nominal_pumps()},
                {"simulation",
                 {{"t_final_s", 1e-6},
                  {"full_window_s", 0.2e-6},
                  {"samples", 10},
                  {"cavity_dim", 12},
                  {"rtol", 1e-7}}},
                {"output", {{"wigner_grid", {{"range", 2.5}, {"points", 5}}}}}};
    cfg["device"]["gamma_fg_eng_hz"] = 4e6;
    const std::string path = write_config("fig3.json", cfg);
    const fs::path out_dir = scratch_dir() / "fig3_out";

    REQUIRE(run_cli("fig3 --reduced --config " + path + " --out " + out_dir.string()) == 0);
    const json r = report_at(out_dir);
    const json& wc = r["results"]["window_comparison"];
    CHECK(wc["window_s"].get<double>() == doctest::Approx(0.2e-6));
    CHECK(wc["max_gap_full_vs_three_level"].get<double>() >= 0.0);
    CHECK(wc["max_gap_full_vs_cavity"].get<double>() >= 0.0);
    CHECK(wc["max_p_e"].get<double>() < 1.0);
    CHECK(fs::exists(out_dir / "fig3_full.csv"));
    CHECK(fs::exists(out_dir / "fig3_effective.csv"));
}

}  // TEST_SUITE("cli")
