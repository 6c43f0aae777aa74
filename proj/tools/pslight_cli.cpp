#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "pslight/config.hpp"
#include "pslight/scenarios.hpp"

namespace {

using pslight::ScenarioConfig;
using pslight::ScenarioOutput;
using Runner = std::function<ScenarioOutput(const ScenarioConfig&, const std::filesystem::path&)>;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> modes;
    std::optional<std::size_t> realizations;
    std::optional<double> d1;
    std::optional<double> d2;
    std::optional<double> lag_max;
    std::optional<unsigned> threads;
    std::string config;
    std::string out_dir = ".";
};

ScenarioConfig resolve(const Overrides& o, const std::string& scenario) {
    ScenarioConfig cfg;
    if (!o.config.empty()) cfg = pslight::load_config_file(o.config, cfg);
    if (o.seed) cfg.seed = *o.seed;
    if (o.modes) {
        if (scenario == "pulse")
            cfg.pulse.n_modes = *o.modes;
        else if (scenario == "quantum")
            cfg.quantum.n_modes = *o.modes;
        else
            cfg.n_modes = *o.modes;
    }
    if (o.realizations) cfg.n_realizations = *o.realizations;
    if (o.d1) cfg.media.d1 = *o.d1;
    if (o.d2) cfg.media.d2 = *o.d2;
    if (o.lag_max) cfg.lags.max = *o.lag_max;
    if (o.threads) cfg.threads = *o.threads;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chaotic and entangled light through dispersive media"};
    app.require_subcommand(1);

    Overrides o;
    const std::map<std::string, std::pair<std::string, Runner>> scenarios = {
        {"hbt", {"HBT curves of the phase-sensitive pair before and after dispersion", pslight::run_hbt}},
        {"fields", {"intensity traces of one realization", pslight::run_fields}},
        {"sweep", {"zero-lag deficit over a (d1, d2) grid with a quadratic fit", pslight::run_sweep}},
        {"pulse", {"transform-limited chaotic pulse vs. quantum coincidence width", pslight::run_pulse}},
        {"identical-beams", {"HBT curves with beam 2 a copy of beam 1", pslight::run_identical_beams}},
        {"quantum", {"biphoton coincidence profile", pslight::run_quantum}},
    };

    Runner selected;
    std::string selected_name;
    for (const auto& [name, entry] : scenarios) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--modes", o.modes, "number of spectral modes (pulse and quantum: their own mode grids)");
        sub->add_option("--realizations", o.realizations, "number of ensemble realizations");
        sub->add_option("--d1", o.d1, "reduced dispersion of medium 1");
        sub->add_option("--d2", o.d2, "reduced dispersion of medium 2");
        sub->add_option("--lag-max", o.lag_max, "largest lag");
        sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
        sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", o.out_dir, "output directory");
        const Runner run = entry.second;
        sub->callback([&selected, &selected_name, run, name = name] {
            selected = run;
            selected_name = name;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const ScenarioConfig cfg = resolve(o, selected_name);
        const ScenarioOutput out = selected(cfg, o.out_dir);
        for (const auto& f : out.files) std::cout << f.string() << '\n';
        return 0;
    } catch (const pslight::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const pslight::RankError& e) {
        std::cerr << "rank error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const pslight::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
