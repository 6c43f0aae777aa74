#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pslight/dispersion.hpp"
#include "pslight/ensemble.hpp"
#include "pslight/types.hpp"

namespace pslight {

/// Invalid or unknown configuration entry. `field` is the dotted key path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

enum class FieldBackend { modes, markov };

/// Fully resolved scenario parameters. Media are given as dimensionless
/// D = β·L·σ_ω².
struct ScenarioConfig {
    std::uint64_t seed = 20091;
    std::size_t n_modes = 256;
    std::size_t n_realizations = 10000;
    unsigned threads = 0;

    SpectralEnvelope envelope;
    double half_span = 4.0;

    struct Grid {
        double window_coherence_times = 40.0;
        double step = 0.05;
        double start = 0.0;
    } grid;

    struct Media {
        double d1 = 2.0;
        double d2 = -2.0;
        double length = 1.0;
        double alpha1 = 0.0;
        double alpha2 = 0.0;
    } media;

    struct Lags {
        double max = 15.0;
        double background_min_coherence_times = 10.0;
    } lags;

    struct Sweep {
        std::vector<double> d_values{-0.5, -0.25, 0.0, 0.25, 0.5};
        std::vector<std::pair<double, double>> points;  // overrides d_values when set
    } sweep;

    struct Pulse {
        double bandwidth = 1.0;
        double phase_jitter = 0.0;
        double window = 200.0;
        double step = 0.1;
        std::size_t n_modes = 512;
        double half_span = 6.0;  // in units of the pulse bandwidth
    } pulse;

    struct Fields {
        FieldBackend backend = FieldBackend::modes;
        double coherence_time = 1.0;  // Markov backend only
        std::size_t realization = 0;
    } fields;

    struct Quantum {
        std::size_t n_modes = 512;
        double half_span = 4.0;
    } quantum;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    TimeGrid time_grid() const;
    EnsembleSpec ensemble() const;
    DispersiveMedium medium1() const;
    DispersiveMedium medium2() const;
    /// Symmetric lags -max..max on the time grid step.
    std::vector<double> lag_grid() const;
    double background_min_lag() const;
    std::vector<std::pair<double, double>> sweep_points() const;
};

/// Applies a JSON document on top of `base`. Unknown keys and wrong types
/// are ConfigErrors.
ScenarioConfig apply_config_json(ScenarioConfig base, const nlohmann::json& doc);

ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base = {});

nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);

}  // namespace pslight
