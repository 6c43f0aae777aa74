#include <algorithm>
#include <cmath>
#include <map>

#include "pslight/correlation.hpp"
#include "pslight/dispersion.hpp"
#include "pslight/mode_field.hpp"

namespace pslight {

using detail::require;

namespace {

struct PairPartial {
    PairPartial(const TimeGrid& grid, std::span<const double> lags) : reference(grid, lags), dispersed(grid, lags) {}
    CorrelationAccumulator reference;
    CorrelationAccumulator dispersed;
    std::vector<std::pair<std::size_t, ZeroLagSample>> ref_zero;
    std::vector<std::pair<std::size_t, ZeroLagSample>> dis_zero;
};

// Index of each distinct value in a sorted list.
std::map<double, std::size_t> index_distinct(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::map<double, std::size_t> index;
    for (std::size_t i = 0; i < values.size(); ++i) index.emplace(values[i], i);
    return index;
}

}  // namespace

PairCorrelation pair_correlation(const EnsembleSpec& spec, std::span<const double> lags,
                                 const DispersiveMedium& med1, const DispersiveMedium& med2, BeamPairing pairing,
                                 const CorrelationOptions& opts) {
    spec.validate();
    med1.validate();
    med2.validate();
    const std::vector<double> offsets = symmetric_offsets(spec.n_modes, spec.half_span * spec.envelope.rms_width);
    const FieldSynthesizer beam1(offsets, spec.grid);
    const FieldSynthesizer beam2(partner_modes(realization_modes(spec, 0), pairing).offsets, spec.grid);
    // Validates the lags once, up front.
    const CorrelationAccumulator probe(spec.grid, lags);

    auto partials = run_blocks<PairPartial>(
        spec.n_realizations, spec.threads, [&] { return PairPartial(spec.grid, lags); },
        [&](PairPartial& part, std::size_t r) {
            const SpectralModes m1 = realization_modes(spec, r);
            const SpectralModes m2 = partner_modes(m1, pairing);
            const SpectralModes d1 = apply_dispersion_modes(m1, med1);
            const SpectralModes d2 = apply_dispersion_modes(m2, med2);
            thread_local std::vector<double> i1, i2, j1, j2;
            i1.resize(spec.grid.count);
            i2.resize(spec.grid.count);
            j1.resize(spec.grid.count);
            j2.resize(spec.grid.count);
            beam1.intensity_into(m1.amplitudes, m1.phases, i1);
            beam2.intensity_into(m2.amplitudes, m2.phases, i2);
            beam1.intensity_into(d1.amplitudes, d1.phases, j1);
            beam2.intensity_into(d2.amplitudes, d2.phases, j2);
            part.reference.add(i1, i2);
            part.dispersed.add(j1, j2);
            part.ref_zero.emplace_back(r, zero_lag_sample(i1, i2));
            part.dis_zero.emplace_back(r, zero_lag_sample(j1, j2));
        });

    CorrelationAccumulator reference(spec.grid, lags);
    CorrelationAccumulator dispersed(spec.grid, lags);
    std::vector<ZeroLagSample> ref_zero(spec.n_realizations), dis_zero(spec.n_realizations);
    for (const auto& part : partials) {
        reference.merge(part.reference);
        dispersed.merge(part.dispersed);
        for (const auto& [r, s] : part.ref_zero) ref_zero[r] = s;
        for (const auto& [r, s] : part.dis_zero) dis_zero[r] = s;
    }
    return {reference.finish(opts), dispersed.finish(opts), paired_zero_lag_deficit(ref_zero, dis_zero)};
}

std::vector<SweepRow> dispersion_sweep(const EnsembleSpec& spec, std::span<const std::pair<double, double>> beta_grid,
                                       BeamPairing pairing) {
    spec.validate();
    require(!beta_grid.empty(), "sweep: beta grid is empty");
    for (const auto& [b1, b2] : beta_grid)
        require(std::isfinite(b1) && std::isfinite(b2), "sweep: non-finite dispersion value");

    // Beam 1 after medium 1 depends only on β₁, beam 2 only on β₂, so each
    // distinct value is synthesized once per realization.
    std::vector<double> firsts, seconds;
    for (const auto& [b1, b2] : beta_grid) {
        firsts.push_back(b1);
        seconds.push_back(b2);
    }
    const auto index1 = index_distinct(firsts);
    const auto index2 = index_distinct(seconds);
    auto medium = [&](double d) { return DispersiveMedium::from_reduced(d, spec.envelope.rms_width); };
    std::vector<DispersiveMedium> media1(index1.size()), media2(index2.size());
    for (const auto& [d, i] : index1) media1[i] = medium(d);
    for (const auto& [d, i] : index2) media2[i] = medium(d);
    std::vector<std::pair<std::size_t, std::size_t>> point_index;
    for (const auto& [b1, b2] : beta_grid) point_index.emplace_back(index1.at(b1), index2.at(b2));

    const std::vector<double> offsets = symmetric_offsets(spec.n_modes, spec.half_span * spec.envelope.rms_width);
    const FieldSynthesizer beam1(offsets, spec.grid);
    const FieldSynthesizer beam2(partner_modes(realization_modes(spec, 0), pairing).offsets, spec.grid);
    const std::size_t n_points = beta_grid.size();

    // Per-realization samples: slot 0 is the reference, 1..n_points the grid.
    struct Partial {
        std::vector<std::pair<std::size_t, std::vector<ZeroLagSample>>> rows;
    };
    auto partials = run_blocks<Partial>(
        spec.n_realizations, spec.threads, [] { return Partial{}; },
        [&](Partial& part, std::size_t r) {
            const SpectralModes m1 = realization_modes(spec, r);
            const SpectralModes m2 = partner_modes(m1, pairing);
            const std::size_t count = spec.grid.count;
            std::vector<std::vector<double>> out1(media1.size(), std::vector<double>(count));
            std::vector<std::vector<double>> out2(media2.size(), std::vector<double>(count));
            for (std::size_t i = 0; i < media1.size(); ++i) {
                const SpectralModes d = apply_dispersion_modes(m1, media1[i]);
                beam1.intensity_into(d.amplitudes, d.phases, out1[i]);
            }
            for (std::size_t i = 0; i < media2.size(); ++i) {
                const SpectralModes d = apply_dispersion_modes(m2, media2[i]);
                beam2.intensity_into(d.amplitudes, d.phases, out2[i]);
            }
            std::vector<double> i1(count), i2(count);
            beam1.intensity_into(m1.amplitudes, m1.phases, i1);
            beam2.intensity_into(m2.amplitudes, m2.phases, i2);

            std::vector<ZeroLagSample> samples(n_points + 1);
            samples[0] = zero_lag_sample(i1, i2);
            for (std::size_t p = 0; p < n_points; ++p)
                samples[p + 1] = zero_lag_sample(out1[point_index[p].first], out2[point_index[p].second]);
            part.rows.emplace_back(r, std::move(samples));
        });

    std::vector<std::vector<ZeroLagSample>> by_point(n_points + 1, std::vector<ZeroLagSample>(spec.n_realizations));
    for (const auto& part : partials)
        for (const auto& [r, samples] : part.rows)
            for (std::size_t p = 0; p <= n_points; ++p) by_point[p][r] = samples[p];

    std::vector<SweepRow> rows;
    rows.reserve(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        const ZeroLagDeficit d = paired_zero_lag_deficit(by_point[0], by_point[p + 1]);
        rows.push_back({beta_grid[p].first, beta_grid[p].second, d.deficit, d.std_error, d.raw_deficit});
    }
    return rows;
}

}  // namespace pslight
