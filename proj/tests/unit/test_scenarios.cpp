#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "pslight/config.hpp"
#include "pslight/scenarios.hpp"

using namespace pslight;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pslight_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig quick() {
    ScenarioConfig cfg;
    cfg.n_modes = 64;
    cfg.n_realizations = 128;
    cfg.grid.window_coherence_times = 20.0;
    cfg.lags.max = 8.0;
    cfg.lags.background_min_coherence_times = 5.0;
    cfg.threads = 1;
    return cfg;
}

std::vector<std::vector<double>> read_columns(const fs::path& p, std::size_t n_cols) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> cols(n_cols);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t c = 0; c < n_cols && std::getline(ss, cell, ','); ++c) cols[c].push_back(std::stod(cell));
    }
    return cols;
}

}  // namespace

TEST_CASE("defaults are valid and echo completely") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    const auto j = config_to_json(cfg);
    for (const char* key : {"seed", "n_modes", "n_realizations", "envelope", "modes", "grid", "media", "lags", "sweep",
                            "pulse", "fields", "quantum"})
        CHECK(j.contains(key));
    CHECK_FALSE(j.contains("threads"));
    CHECK(cfg.time_grid().count == 800);
    CHECK(cfg.sweep_points().size() == 25);
    CHECK(cfg.lag_grid().size() == 601);
    CHECK(cfg.lag_grid()[300] == 0.0);

    // The echo parses back to the same configuration.
    const auto again = apply_config_json(ScenarioConfig{}, nlohmann::json::parse(j.dump()));
    CHECK(config_to_json(again).dump() == j.dump());
}

TEST_CASE("config errors name the field") {
    auto field_of = [](const std::string& text) {
        try {
            apply_config_json(ScenarioConfig{}, nlohmann::json::parse(text)).validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"n_realizations": 0})") == "n_realizations");
    CHECK(field_of(R"({"n_realizations": 1})") == "n_realizations");
    CHECK(field_of(R"({"bogus": 1})") == "bogus");
    CHECK(field_of(R"({"media": {"d3": 1}})") == "media.d3");
    CHECK(field_of(R"({"media": {"d1": "big"}})") == "media.d1");
    CHECK(field_of(R"({"grid": {"step": -0.1}})") == "grid.step");
    CHECK(field_of(R"({"seed": -4})") == "seed");
    CHECK(field_of(R"({"fields": {"backend": "laser"}})") == "fields.backend");
    CHECK(field_of(R"({"envelope": {"shape": "lorentzian"}})") == "envelope.shape");
    CHECK(field_of(R"({"media": {"d1": 0.5}, "lags": {"max": 3}})") == "<none>");
}

TEST_CASE("config file layering") {
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"seed": 7, "media": {"d1": 0.5}})";
    ScenarioConfig base;
    base.n_modes = 32;
    const auto cfg = load_config_file(dir / "c.json", base);
    CHECK(cfg.seed == 7);
    CHECK(cfg.media.d1 == 0.5);
    CHECK(cfg.media.d2 == -2.0);
    CHECK(cfg.n_modes == 32);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_config_file(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config_file(dir / "missing.json"), ConfigError);
}

TEST_CASE("hbt scenario writes curves and a summary") {
    const fs::path dir = scratch("hbt");
    const auto out = run_hbt(quick(), dir);
    REQUIRE(out.files.size() == 3);
    for (const auto& f : out.files) CHECK(fs::exists(f));
    CHECK(slurp(out.files[0]).rfind("lag,g2,stderr\n", 0) == 0);
    CHECK(out.summary["scenario"] == "hbt");
    CHECK(out.summary["config"]["media"]["d1"] == 2.0);
    CHECK(out.summary["reference"]["peak_to_background"].get<double>() == doctest::Approx(2.0).epsilon(0.15));
    CHECK(out.summary.contains("classical_vs_quantum"));
    const auto cols = read_columns(out.files[1], 3);
    CHECK(cols[0].size() == quick().lag_grid().size());
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    auto cfg = quick();
    cfg.n_realizations = 300;
    const auto a = run_hbt(cfg, scratch("repro_a"));
    cfg.threads = 3;
    const auto b = run_hbt(cfg, scratch("repro_b"));
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(slurp(a.files[i]) == slurp(b.files[i]));

    const auto s1 = run_sweep(cfg, scratch("repro_c"));
    cfg.threads = 1;
    const auto s2 = run_sweep(cfg, scratch("repro_d"));
    for (std::size_t i = 0; i < s1.files.size(); ++i) CHECK(slurp(s1.files[i]) == slurp(s2.files[i]));
}

TEST_CASE("fields scenario traces") {
    auto cfg = quick();
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        cfg.seed = seed;
        const auto out = run_fields(cfg, scratch("fields"));
        const auto cols = read_columns(out.files[0], 5);
        CHECK(testing::max_abs_diff(cols[1], cols[2]) <= 1e-12);
        CHECK(testing::max_abs_diff(cols[3], cols[4]) <= 1e-9);
        CHECK(testing::max_abs_diff(cols[1], cols[3]) > 0.1);
        CHECK(out.summary["intensity_gap_before"].get<double>() <= 1e-12);
        CHECK(out.summary["intensity_gap_after"].get<double>() <= 1e-9);
        CHECK(out.summary["field_change_beam1"].get<double>() > 0.1);
    }
    cfg.media.d1 = cfg.media.d2 = 0.0;
    const auto flat = run_fields(cfg, scratch("fields0"));
    const auto cols = read_columns(flat.files[0], 5);
    CHECK(cols[1] == cols[3]);

    cfg.media.d1 = cfg.media.d2 = 1.0;
    CHECK(run_fields(cfg, scratch("fields1")).summary["intensity_gap_after"].get<double>() > 0.1);

    cfg.media.d1 = 1.0;
    cfg.media.d2 = -1.0;
    cfg.fields.backend = FieldBackend::markov;
    const auto markov = run_fields(cfg, scratch("fields_markov"));
    CHECK(markov.summary["intensity_gap_before"].get<double>() <= 1e-12);
    CHECK(markov.summary["intensity_gap_after"].get<double>() <= 1e-9);
    cfg.fields.coherence_time = 0.2;
    CHECK_THROWS_AS(run_fields(cfg, scratch("fields_guard")), NumericalGuardError);
}

TEST_CASE("sweep rejects a rank-deficient grid before simulating") {
    auto cfg = quick();
    cfg.sweep.points = {{0, 0}, {0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}, {0.4, 0.4}, {0.5, 0.5}};
    const fs::path dir = scratch("sweep_rank");
    CHECK_THROWS_AS(run_sweep(cfg, dir), ConfigError);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("pulse scenario") {
    auto cfg = quick();
    cfg.media.d1 = 3.0;
    cfg.media.d2 = -3.0;
    const auto out = run_pulse(cfg, scratch("pulse"));
    const auto& c = out.summary["classical"];
    CHECK(c["beam1_growth"].get<double>() == doctest::Approx(c["beam1_oracle_growth"].get<double>()).epsilon(0.03));
    CHECK(c["beam2_growth"].get<double>() == doctest::Approx(c["beam2_oracle_growth"].get<double>()).epsilon(0.03));
    CHECK(out.summary["quantum"]["profile_bit_identical"] == true);

    cfg.media.d1 = -3.0;
    cfg.media.d2 = 3.0;
    const auto flipped = run_pulse(cfg, scratch("pulse_flip"));
    CHECK(flipped.summary["classical"]["beam1_width_after"].get<double>() ==
          doctest::Approx(c["beam1_width_after"].get<double>()).epsilon(1e-9));

    cfg.media.d1 = cfg.media.d2 = 0.0;
    const auto still = run_pulse(cfg, scratch("pulse0"));
    CHECK(still.summary["classical"]["beam1_growth"].get<double>() == 1.0);

    cfg.media.d1 = 30.0;
    cfg.media.d2 = -30.0;
    CHECK_THROWS_AS(run_pulse(cfg, scratch("pulse_window")), WindowError);
    cfg.media.d1 = cfg.media.d2 = 0.0;
    cfg.pulse.window = 400.0;
    CHECK_THROWS_AS(run_pulse(cfg, scratch("pulse_period")), WindowError);
}

TEST_CASE("quantum scenario") {
    auto cfg = quick();
    cfg.media.d1 = 0.5;
    cfg.media.d2 = 0.5;
    const auto out = run_quantum(cfg, scratch("quantum"));
    CHECK(out.summary["rms_width"].get<double>() ==
          doctest::Approx(out.summary["oracle_rms_width"].get<double>()).epsilon(0.01));
    CHECK(out.summary["bit_identical_to_reference"] == false);
    cfg.media.d2 = -0.5;
    CHECK(run_quantum(cfg, scratch("quantum0")).summary["bit_identical_to_reference"] == true);
}

TEST_CASE("Nyquist guard") {
    auto cfg = quick();
    cfg.grid.step = 1.0;
    CHECK_THROWS_AS(run_hbt(cfg, scratch("nyquist")), NyquistError);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
