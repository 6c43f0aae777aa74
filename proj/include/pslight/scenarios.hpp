#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "pslight/config.hpp"
#include "pslight/correlation.hpp"

namespace pslight {

/// Summary written as <scenario>_summary.json plus the list of files written.
struct ScenarioOutput {
    nlohmann::ordered_json summary;
    std::vector<std::filesystem::path> files;
};

/// HBT curves of the phase-sensitive pair with and without media.
ScenarioOutput run_hbt(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Four intensity traces of one realization: beams 1 and 2 before and after media.
ScenarioOutput run_fields(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Zero-lag deficit over the (d1, d2) grid and its quadratic fit.
ScenarioOutput run_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Transform-limited chaotic pulse through the media vs. the quantum coincidence width.
ScenarioOutput run_pulse(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Beam 2 a copy of beam 1 instead of its conjugate partner.
ScenarioOutput run_identical_beams(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Biphoton coincidence profile with and without media.
ScenarioOutput run_quantum(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// CSV with header `lag,g2,stderr`.
void write_curve_csv(const std::filesystem::path& path, const CorrelationEstimate& est);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Curve comparison: max over lags of |g_a - g_b| / sqrt(se_a² + se_b²).
double max_curve_z(const CorrelationEstimate& a, const CorrelationEstimate& b);

}  // namespace pslight
