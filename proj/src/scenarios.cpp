#include "pslight/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "pslight/dispersion.hpp"
#include "pslight/mode_field.hpp"
#include "pslight/quantum.hpp"

namespace pslight {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

ojson header(const char* scenario, const ScenarioConfig& cfg) {
    ojson j;
    j["scenario"] = scenario;
    j["config"] = config_to_json(cfg);
    return j;
}

ojson nan_as_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

std::size_t zero_index(const CorrelationEstimate& est) {
    return static_cast<std::size_t>(std::find(est.lags.begin(), est.lags.end(), 0.0) - est.lags.begin());
}

ojson curve_summary(const CorrelationEstimate& est) {
    ojson j;
    j["n_realizations"] = est.n_realizations;
    j["peak_height"] = nan_as_null(est.peak_height);
    j["peak_stderr"] = est.std_error.at(zero_index(est));
    j["background"] = nan_as_null(est.background);
    j["peak_to_background"] = nan_as_null(est.peak_to_background());
    j["peak_fwhm"] = nan_as_null(est.peak_fwhm);
    j["mean_intensity_1"] = est.mean1;
    j["mean_intensity_1_stderr"] = est.mean1_stderr;
    j["mean_intensity_2"] = est.mean2;
    j["mean_intensity_2_stderr"] = est.mean2_stderr;
    return j;
}

ojson deficit_json(const ZeroLagDeficit& d) {
    return {{"g2_reference", d.reference},
            {"g2_dispersed", d.dispersed},
            {"deficit", d.deficit},
            {"stderr", d.std_error},
            {"raw_deficit", d.raw_deficit}};
}

ojson comparison_json(const CorrelationEstimate& ref, const CorrelationEstimate& dis) {
    const double z = max_curve_z(ref, dis);
    const double mean_z = std::abs(ref.mean1 - dis.mean1) /
                          std::hypot(ref.mean1_stderr, dis.mean1_stderr);
    return {{"max_abs_z", z},
            {"within_3_stderr", z <= 3.0},
            {"fwhm_relative_difference", nan_as_null(std::abs(dis.peak_fwhm - ref.peak_fwhm) / ref.peak_fwhm)},
            {"mean_intensity_z", nan_as_null(mean_z)}};
}

void require_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Shared by `hbt` and `identical-beams`.
ScenarioOutput run_pair(const char* name, BeamPairing pairing, const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    require_dir(out_dir);
    const EnsembleSpec spec = cfg.ensemble();
    const std::vector<double> lags = cfg.lag_grid();
    CorrelationOptions opts;
    opts.background_min_lag = cfg.background_min_lag();
    const PairCorrelation pc = pair_correlation(spec, lags, cfg.medium1(), cfg.medium2(), pairing, opts);

    ScenarioOutput out;
    const std::string prefix = name;
    out.files = {out_dir / (prefix + "_reference.csv"), out_dir / (prefix + "_dispersed.csv"),
                 out_dir / (prefix + "_summary.json")};
    write_curve_csv(out.files[0], pc.reference);
    write_curve_csv(out.files[1], pc.dispersed);

    ojson j = header(name, cfg);
    j["reference"] = curve_summary(pc.reference);
    j["dispersed"] = curve_summary(pc.dispersed);
    j["comparison"] = comparison_json(pc.reference, pc.dispersed);
    j["zero_lag_deficit"] = deficit_json(pc.zero_lag);
    if (pairing == BeamPairing::phase_sensitive) {
        const BiphotonSpectrum s = gaussian_biphoton_spectrum(cfg.envelope, cfg.n_modes, cfg.half_span);
        const CorrelationEstimate q = coincidence_profile(s, lags, cfg.medium1(), cfg.medium2());
        const ClassicalQuantumReport rep = classical_vs_quantum_report(pc.dispersed, q);
        j["classical_vs_quantum"] = {{"classical_fwhm", nan_as_null(rep.classical_fwhm)},
                                     {"quantum_fwhm", nan_as_null(rep.quantum_fwhm)},
                                     {"width_ratio", nan_as_null(rep.width_ratio)},
                                     {"classical_background", nan_as_null(rep.classical_background)},
                                     {"quantum_background", rep.quantum_background},
                                     {"classical_peak_to_background", nan_as_null(rep.classical_peak_to_background)},
                                     {"classical_hbt_peak", rep.classical_hbt_peak},
                                     {"quantum_all_coincident", rep.quantum_all_coincident},
                                     {"notes", rep.notes}};
    }
    write_json(out.files[2], j);
    out.summary = std::move(j);
    return out;
}

double field_rms(const ComplexFieldSeries& f) {
    double acc = 0.0;
    for (const Complex& z : f.samples) acc += std::norm(z);
    return std::sqrt(acc / static_cast<double>(f.samples.size()));
}

double max_field_change(const ComplexFieldSeries& before, const ComplexFieldSeries& after) {
    double m = 0.0;
    for (std::size_t k = 0; k < before.samples.size(); ++k) m = std::max(m, std::abs(after.samples[k] - before.samples[k]));
    return m / field_rms(before);
}

void write_traces(const fs::path& path, const TimeGrid& grid, const RealSeries& a, const RealSeries& b,
                  const RealSeries& c, const RealSeries& d) {
    std::string text = "t,a,b,c,d\n";
    for (std::size_t k = 0; k < grid.count; ++k) {
        text += format_double(grid.at(k)) + ',' + format_double(a.values[k]) + ',' + format_double(b.values[k]) + ',' +
                format_double(c.values[k]) + ',' + format_double(d.values[k]) + '\n';
    }
    write_text(path, text);
}

// Fraction of the trace's energy in the outer 10% of the window.
double edge_energy_fraction(const RealSeries& s) {
    const std::size_t count = s.values.size();
    const auto edge = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(count)));
    double total = 0.0, outer = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        total += s.values[k];
        if (k < edge || k >= count - edge) outer += s.values[k];
    }
    return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

void write_curve_csv(const fs::path& path, const CorrelationEstimate& est) {
    std::string text = "lag,g2,stderr\n";
    for (std::size_t i = 0; i < est.lags.size(); ++i)
        text += format_double(est.lags[i]) + ',' + format_double(est.g2[i]) + ',' + format_double(est.std_error[i]) + '\n';
    write_text(path, text);
}

double max_curve_z(const CorrelationEstimate& a, const CorrelationEstimate& b) {
    detail::require(a.lags == b.lags, "curve comparison: lag grids differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.lags.size(); ++i) {
        const double diff = std::abs(a.g2[i] - b.g2[i]);
        const double se = std::hypot(a.std_error[i], b.std_error[i]);
        if (diff == 0.0) continue;
        worst = std::max(worst, se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
    }
    return worst;
}

ScenarioOutput run_hbt(const ScenarioConfig& cfg, const fs::path& out_dir) {
    return run_pair("hbt", BeamPairing::phase_sensitive, cfg, out_dir);
}

ScenarioOutput run_identical_beams(const ScenarioConfig& cfg, const fs::path& out_dir) {
    return run_pair("identical_beams", BeamPairing::identical, cfg, out_dir);
}

ScenarioOutput run_fields(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    require_dir(out_dir);
    const TimeGrid grid = cfg.time_grid();
    const DispersiveMedium med1 = cfg.medium1();
    const DispersiveMedium med2 = cfg.medium2();

    ComplexFieldSeries e1, e2, e1d, e2d;
    if (cfg.fields.backend == FieldBackend::modes) {
        const SpectralModes m = sample_chaotic_modes(cfg.envelope, cfg.n_modes, cfg.half_span, cfg.seed,
                                                     cfg.fields.realization);
        const SpectralModes p = conjugate_partner_modes(m);
        const FieldSynthesizer beam1(m.offsets, grid);
        const FieldSynthesizer beam2(p.offsets, grid);
        e1 = beam1.synthesize(m);
        e2 = beam2.synthesize(p);
        e1d = beam1.synthesize(apply_dispersion_modes(m, med1));
        e2d = beam2.synthesize(apply_dispersion_modes(p, med2));
    } else {
        e1 = markov_chaotic_field(grid, cfg.fields.coherence_time, cfg.envelope.mean_intensity, cfg.seed,
                                  cfg.fields.realization);
        e2 = conjugate_series(e1);
        e1d = apply_dispersion_series(e1, med1);
        e2d = apply_dispersion_series(e2, med2);
    }

    ScenarioOutput out;
    out.files = {out_dir / "fields_traces.csv", out_dir / "fields_summary.json"};
    write_traces(out.files[0], grid, intensity(e1), intensity(e2), intensity(e1d), intensity(e2d));

    ojson j = header("fields", cfg);
    j["backend"] = cfg.fields.backend == FieldBackend::modes ? "modes" : "markov";
    j["intensity_gap_before"] = per_realization_intensity_gap(e1, e2);
    j["intensity_gap_after"] = per_realization_intensity_gap(e1d, e2d);
    j["field_change_beam1"] = max_field_change(e1, e1d);
    j["field_change_beam2"] = max_field_change(e2, e2d);
    write_json(out.files[1], j);
    out.summary = std::move(j);
    return out;
}

ScenarioOutput run_sweep(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    const std::vector<std::pair<double, double>> points = cfg.sweep_points();
    try {
        check_quadratic_design(points);
    } catch (const RankError& e) {
        throw ConfigError("sweep", e.what());
    }
    require_dir(out_dir);
    const std::vector<SweepRow> rows = dispersion_sweep(cfg.ensemble(), points);
    const QuadraticFit fit = fit_quadratic_surface(rows);

    ScenarioOutput out;
    out.files = {out_dir / "sweep.csv", out_dir / "sweep_fit.json"};
    std::string text = "d1,d2,deficit,stderr,raw_deficit\n";
    double max_deficit = 0.0;
    ojson diagonal = ojson::array();
    for (const SweepRow& r : rows) {
        text += format_double(r.beta1) + ',' + format_double(r.beta2) + ',' + format_double(r.deficit) + ',' +
                format_double(r.std_error) + ',' + format_double(r.raw_deficit) + '\n';
        max_deficit = std::max(max_deficit, r.deficit);
        if (r.beta2 == -r.beta1) {
            diagonal.push_back({{"d1", r.beta1},
                                {"d2", r.beta2},
                                {"deficit", r.deficit},
                                {"stderr", r.std_error},
                                {"within_2_stderr", std::abs(r.deficit) <= 2.0 * r.std_error}});
        }
    }
    write_text(out.files[0], text);

    ojson j = header("sweep", cfg);
    j["fit"] = {{"a", fit.a},   {"b1", fit.b1}, {"b2", fit.b2},
                {"c1", fit.c1}, {"c2", fit.c2}, {"d", fit.d},
                {"residual_rms", fit.residual_rms}};
    j["max_deficit"] = max_deficit;
    j["ratios"] = {{"b1_over_c1", fit.b1 / fit.c1},
                   {"b2_over_c1", fit.b2 / fit.c1},
                   {"c2_minus_c1_over_c1", (fit.c2 - fit.c1) / fit.c1},
                   {"d_minus_2c1_over_c1", (fit.d - 2.0 * fit.c1) / fit.c1},
                   {"residual_over_c1_max_deficit", fit.residual_rms / (fit.c1 * max_deficit)}};
    j["diagonal"] = diagonal;
    write_json(out.files[1], j);
    out.summary = std::move(j);
    return out;
}

ScenarioOutput run_pulse(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    require_dir(out_dir);
    TimeGrid grid;
    grid.step = cfg.pulse.step;
    grid.count = static_cast<std::size_t>(std::llround(cfg.pulse.window / cfg.pulse.step));
    grid.start = -0.5 * static_cast<double>(grid.count) * grid.step;

    PulseOptions popts;
    popts.phase_jitter = cfg.pulse.phase_jitter;
    popts.half_span = cfg.pulse.half_span;
    const SpectralModes m = pulse_modes(cfg.envelope, cfg.pulse.n_modes, cfg.pulse.bandwidth, cfg.seed, popts);
    // The mode sum repeats with period 2π/δω; a longer window would see the next pulse.
    const double period = 2.0 * std::numbers::pi / (m.offsets[1] - m.offsets[0]);
    if (grid.duration() >= period) {
        throw WindowError("pulse window " + format_double(grid.duration()) + " exceeds the mode-grid period " +
                          format_double(period) + "; use more pulse modes");
    }
    const SpectralModes p = conjugate_partner_modes(m);
    const DispersiveMedium med1 = cfg.medium1();
    const DispersiveMedium med2 = cfg.medium2();
    const FieldSynthesizer beam1(m.offsets, grid);
    const FieldSynthesizer beam2(p.offsets, grid);
    const RealSeries a = intensity(beam1.synthesize(m));
    const RealSeries b = intensity(beam2.synthesize(p));
    const RealSeries c = intensity(beam1.synthesize(apply_dispersion_modes(m, med1)));
    const RealSeries d = intensity(beam2.synthesize(apply_dispersion_modes(p, med2)));
    for (const RealSeries* s : {&a, &b, &c, &d}) {
        const double frac = edge_energy_fraction(*s);
        if (frac > 0.01) {
            throw WindowError("pulse window too short: " + format_double(100.0 * frac) +
                              "% of the pulse energy lies in the outer 10% of the window");
        }
    }

    // Quantum coincidences for the same amplitudes, on a lag grid matching the time grid.
    const BiphotonSpectrum s = biphoton_from_modes(m);
    const long half = static_cast<long>(grid.count / 2);
    std::vector<double> lags;
    for (long i = -half; i <= half; ++i) lags.push_back(static_cast<double>(i) * grid.step);
    const DispersiveMedium none{0.0, 0.0, 1.0};
    const CorrelationEstimate q0 = coincidence_profile(s, lags, none, none);
    const CorrelationEstimate q1 = coincidence_profile(s, lags, med1, med2);

    const double w0 = 1.0 / (2.0 * cfg.pulse.bandwidth);
    const double oracle1 = gaussian_broadened_rms_width(w0, med1.dispersion_coeff * med1.length) / w0;
    const double oracle2 = gaussian_broadened_rms_width(w0, med2.dispersion_coeff * med2.length) / w0;
    const double wa = rms_duration(a), wb = rms_duration(b), wc = rms_duration(c), wd = rms_duration(d);

    ScenarioOutput out;
    out.files = {out_dir / "pulse_traces.csv", out_dir / "pulse_summary.json"};
    write_traces(out.files[0], grid, a, b, c, d);

    ojson j = header("pulse", cfg);
    j["transform_limited_width"] = w0;
    j["classical"] = {{"beam1_width_before", wa},
                      {"beam2_width_before", wb},
                      {"beam1_width_after", wc},
                      {"beam2_width_after", wd},
                      {"beam1_growth", wc / wa},
                      {"beam2_growth", wd / wb},
                      {"beam1_oracle_growth", oracle1},
                      {"beam2_oracle_growth", oracle2}};
    const double qw0 = profile_rms_width(q0.lags, q0.g2);
    const double qw1 = profile_rms_width(q1.lags, q1.g2);
    j["quantum"] = {{"width_before", qw0},
                    {"width_after", qw1},
                    {"growth", qw1 / qw0},
                    {"profile_bit_identical", q0.g2 == q1.g2}};
    write_json(out.files[1], j);
    out.summary = std::move(j);
    return out;
}

ScenarioOutput run_quantum(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    require_dir(out_dir);
    const BiphotonSpectrum s = gaussian_biphoton_spectrum(cfg.envelope, cfg.quantum.n_modes, cfg.quantum.half_span);
    const std::vector<double> lags = cfg.lag_grid();
    const DispersiveMedium med1 = cfg.medium1();
    const DispersiveMedium med2 = cfg.medium2();
    const DispersiveMedium none{0.0, 0.0, 1.0};
    const CorrelationEstimate ref = coincidence_profile(s, lags, none, none);
    const CorrelationEstimate prof = coincidence_profile(s, lags, med1, med2);

    const double sigma = cfg.envelope.rms_width;
    const double w0 = 1.0 / (std::sqrt(2.0) * sigma);
    const double total = med1.dispersion_coeff * med1.length + med2.dispersion_coeff * med2.length;

    ScenarioOutput out;
    out.files = {out_dir / "quantum_reference.csv", out_dir / "quantum_profile.csv", out_dir / "quantum_summary.json"};
    write_curve_csv(out.files[0], ref);
    write_curve_csv(out.files[1], prof);

    ojson j = header("quantum", cfg);
    j["total_quadratic_phase"] = total;
    j["reference_rms_width"] = profile_rms_width(ref.lags, ref.g2);
    j["rms_width"] = profile_rms_width(prof.lags, prof.g2);
    j["oracle_rms_width"] = gaussian_broadened_rms_width(w0, total);
    j["peak_fwhm"] = nan_as_null(prof.peak_fwhm);
    j["background"] = prof.background;
    j["bit_identical_to_reference"] = ref.g2 == prof.g2;
    write_json(out.files[2], j);
    out.summary = std::move(j);
    return out;
}

}  // namespace pslight
