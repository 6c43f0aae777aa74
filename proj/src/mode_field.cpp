#include "pslight/mode_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pslight/rng.hpp"

namespace pslight {

using detail::require;

namespace {

void check_nyquist(double max_offset, const TimeGrid& grid) {
    if (!(grid.step * max_offset < std::numbers::pi)) {
        throw NyquistError("grid step " + std::to_string(grid.step) + " aliases mode offset " +
                           std::to_string(max_offset) + " (need step*max|dw| < pi)");
    }
}

}  // namespace

std::vector<double> symmetric_offsets(std::size_t n_modes, double half_span_width) {
    require(n_modes >= 1, "n_modes must be >= 1");
    require(std::isfinite(half_span_width) && half_span_width > 0.0, "half span must be finite and > 0");
    std::vector<double> offsets(n_modes, 0.0);
    if (n_modes == 1) return offsets;
    const double spacing = 2.0 * half_span_width / static_cast<double>(n_modes - 1);
    const double centre = 0.5 * static_cast<double>(n_modes - 1);
    for (std::size_t n = 0; n < n_modes; ++n) offsets[n] = (static_cast<double>(n) - centre) * spacing;
    return offsets;
}

SpectralModes sample_chaotic_modes(const SpectralEnvelope& env, std::size_t n_modes, double half_span,
                                   std::uint64_t seed, std::uint64_t realization) {
    env.validate();
    require(n_modes >= 1, "n_modes must be >= 1");
    require(std::isfinite(half_span) && half_span > 0.0, "half_span must be finite and > 0");

    SpectralModes m;
    m.offsets = symmetric_offsets(n_modes, half_span * env.rms_width);

    // Mean mode powers follow the Gaussian envelope, normalized to ⟨I⟩.
    std::vector<double> power(n_modes);
    const double two_var = 2.0 * env.rms_width * env.rms_width;
    for (std::size_t n = 0; n < n_modes; ++n) power[n] = std::exp(-m.offsets[n] * m.offsets[n] / two_var);
    const double total = std::accumulate(power.begin(), power.end(), 0.0);
    for (double& p : power) p *= env.mean_intensity / total;

    SubstreamRng rng(seed, realization, StreamTag::modes);
    m.amplitudes.resize(n_modes);
    m.phases.resize(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) {
        // Rayleigh with ⟨c²⟩ = p: c² is exponential with mean p.
        m.amplitudes[n] = std::sqrt(-power[n] * std::log(rng.uniform_open_low()));
        m.phases[n] = 2.0 * std::numbers::pi * rng.uniform();
    }
    return m;
}

SpectralModes conjugate_partner_modes(const SpectralModes& m) {
    m.validate();
    const std::size_t n_modes = m.size();
    SpectralModes p;
    p.carrier = m.carrier;
    p.offsets.resize(n_modes);
    p.amplitudes.resize(n_modes);
    p.phases.resize(n_modes);
    // Negating a strictly increasing sequence reverses it.
    for (std::size_t n = 0; n < n_modes; ++n) {
        const std::size_t src = n_modes - 1 - n;
        p.offsets[n] = -m.offsets[src];
        p.amplitudes[n] = m.amplitudes[src];
        p.phases[n] = -m.phases[src];
    }
    return p;
}

SpectralModes pulse_modes(const SpectralEnvelope& env, std::size_t n_modes, double pulse_bandwidth,
                          std::uint64_t seed, const PulseOptions& opts) {
    env.validate();
    require(n_modes >= 1, "n_modes must be >= 1");
    require(std::isfinite(pulse_bandwidth) && pulse_bandwidth > 0.0, "pulse_bandwidth must be finite and > 0");
    require(std::isfinite(opts.phase_jitter) && opts.phase_jitter >= 0.0 && opts.phase_jitter <= 1.0,
            "phase_jitter must lie in [0, 1]");
    require(std::isfinite(opts.half_span) && opts.half_span > 0.0, "pulse half_span must be > 0");

    SpectralModes m;
    m.offsets = symmetric_offsets(n_modes, opts.half_span * pulse_bandwidth);
    m.amplitudes.resize(n_modes);
    m.phases.assign(n_modes, 0.0);
    const double four_var = 4.0 * pulse_bandwidth * pulse_bandwidth;
    double energy = 0.0;
    for (std::size_t n = 0; n < n_modes; ++n) {
        m.amplitudes[n] = std::exp(-m.offsets[n] * m.offsets[n] / four_var);
        energy += m.amplitudes[n] * m.amplitudes[n];
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (double& c : m.amplitudes) c *= scale;

    if (opts.phase_jitter > 0.0) {
        SubstreamRng rng(seed, 0, StreamTag::pulse);
        for (double& phi : m.phases) phi = opts.phase_jitter * std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    }
    return m;
}

FieldSynthesizer::FieldSynthesizer(std::span<const double> offsets, const TimeGrid& grid)
    : grid_(grid), offsets_(offsets.begin(), offsets.end()) {
    grid_.validate();
    require(!offsets_.empty(), "synthesizer: need at least one mode");
    double max_offset = 0.0;
    for (double w : offsets_) max_offset = std::max(max_offset, std::abs(w));
    check_nyquist(max_offset, grid_);

    const std::size_t count = grid_.count;
    basis_re_.resize(offsets_.size() * count);
    basis_im_.resize(offsets_.size() * count);
    for (std::size_t n = 0; n < offsets_.size(); ++n) {
        double* re = basis_re_.data() + n * count;
        double* im = basis_im_.data() + n * count;
        for (std::size_t k = 0; k < count; ++k) {
            const double arg = offsets_[n] * grid_.at(k);
            re[k] = std::cos(arg);
            im[k] = -std::sin(arg);
        }
    }
}

void FieldSynthesizer::accumulate(std::span<const double> amplitudes, std::span<const double> phases,
                                  std::vector<double>& re, std::vector<double>& im) const {
    require(amplitudes.size() == offsets_.size() && phases.size() == offsets_.size(),
            "synthesizer: mode count mismatch");
    const std::size_t count = grid_.count;
    const std::size_t n_modes = offsets_.size();
    re.assign(count, 0.0);
    im.assign(count, 0.0);
    // Modes n and N-1-n are summed as a pair first. The conjugate partner
    // lists the same terms in reverse, so it rounds to the exact conjugate.
    for (std::size_t n = 0; n < n_modes / 2; ++n) {
        const std::size_t q = n_modes - 1 - n;
        const double ar = amplitudes[n] * std::cos(phases[n]);
        const double ai = amplitudes[n] * std::sin(phases[n]);
        const double cr = amplitudes[q] * std::cos(phases[q]);
        const double ci = amplitudes[q] * std::sin(phases[q]);
        const double* br = basis_re_.data() + n * count;
        const double* bi = basis_im_.data() + n * count;
        const double* dr = basis_re_.data() + q * count;
        const double* di = basis_im_.data() + q * count;
        for (std::size_t k = 0; k < count; ++k) {
            re[k] += (ar * br[k] - ai * bi[k]) + (cr * dr[k] - ci * di[k]);
            im[k] += (ar * bi[k] + ai * br[k]) + (cr * di[k] + ci * dr[k]);
        }
    }
    if (n_modes % 2 == 1) {
        const std::size_t n = n_modes / 2;
        const double ar = amplitudes[n] * std::cos(phases[n]);
        const double ai = amplitudes[n] * std::sin(phases[n]);
        const double* br = basis_re_.data() + n * count;
        const double* bi = basis_im_.data() + n * count;
        for (std::size_t k = 0; k < count; ++k) {
            re[k] += ar * br[k] - ai * bi[k];
            im[k] += ar * bi[k] + ai * br[k];
        }
    }
}

void FieldSynthesizer::synthesize_into(std::span<const double> amplitudes, std::span<const double> phases,
                                       std::span<Complex> out) const {
    require(out.size() == grid_.count, "synthesizer: output size mismatch");
    thread_local std::vector<double> re, im;
    accumulate(amplitudes, phases, re, im);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Complex(re[k], im[k]);
}

void FieldSynthesizer::intensity_into(std::span<const double> amplitudes, std::span<const double> phases,
                                      std::span<double> out) const {
    require(out.size() == grid_.count, "synthesizer: output size mismatch");
    thread_local std::vector<double> re, im;
    accumulate(amplitudes, phases, re, im);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = re[k] * re[k] + im[k] * im[k];
}

ComplexFieldSeries FieldSynthesizer::synthesize(const SpectralModes& m) const {
    m.validate();
    require(std::equal(m.offsets.begin(), m.offsets.end(), offsets_.begin(), offsets_.end()),
            "synthesizer: mode offsets differ from the cached basis");
    ComplexFieldSeries f;
    f.grid = grid_;
    f.carrier = m.carrier;
    f.samples.resize(grid_.count);
    synthesize_into(m.amplitudes, m.phases, f.samples);
    return f;
}

ComplexFieldSeries synthesize_field(const SpectralModes& m, const TimeGrid& grid) {
    m.validate();
    return FieldSynthesizer(m.offsets, grid).synthesize(m);
}

RealSeries intensity(const ComplexFieldSeries& f) {
    f.validate();
    RealSeries s;
    s.grid = f.grid;
    s.values.resize(f.samples.size());
    // Written out rather than std::norm so E and conj(E) give identical bits.
    for (std::size_t k = 0; k < f.samples.size(); ++k) {
        const double re = f.samples[k].real();
        const double im = f.samples[k].imag();
        s.values[k] = re * re + im * im;
    }
    return s;
}

ComplexFieldSeries conjugate_series(const ComplexFieldSeries& f) {
    ComplexFieldSeries g = f;
    for (Complex& z : g.samples) z = std::conj(z);
    return g;
}

ComplexFieldSeries markov_chaotic_field(const TimeGrid& grid, double coherence_time, double mean_intensity,
                                        std::uint64_t seed, std::uint64_t realization) {
    grid.validate();
    require(std::isfinite(coherence_time) && coherence_time > 0.0, "coherence_time must be finite and > 0");
    require(std::isfinite(mean_intensity) && mean_intensity > 0.0, "mean_intensity must be finite and > 0");
    if (!(grid.step < coherence_time / 5.0)) {
        throw NumericalGuardError("markov field: step must be < coherence_time/5");
    }

    SubstreamRng rng(seed, realization, StreamTag::markov);
    const double rho = std::exp(-grid.step / coherence_time);
    // Each quadrature carries half the power.
    const double stationary_sd = std::sqrt(0.5 * mean_intensity);
    const double innovation_sd = stationary_sd * std::sqrt(1.0 - rho * rho);

    ComplexFieldSeries f;
    f.grid = grid;
    f.samples.resize(grid.count);
    auto [x0, y0] = rng.normal_pair();
    f.samples[0] = Complex(stationary_sd * x0, stationary_sd * y0);
    for (std::size_t k = 1; k < grid.count; ++k) {
        auto [x, y] = rng.normal_pair();
        f.samples[k] = rho * f.samples[k - 1] + Complex(innovation_sd * x, innovation_sd * y);
    }
    return f;
}

double rms_duration(const RealSeries& s) {
    s.validate();
    double w = 0.0, first = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        w += s.values[k];
        first += s.values[k] * s.grid.at(k);
    }
    require(w > 0.0, "rms_duration: profile has zero weight");
    const double centroid = first / w;
    double second = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double d = s.grid.at(k) - centroid;
        second += s.values[k] * d * d;
    }
    return std::sqrt(second / w);
}

}  // namespace pslight
