#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pslight/types.hpp"

namespace pslight {

/// Uniform symmetric offsets on [-half_span·σ, +half_span·σ]; a single mode
/// sits at zero. Offsets of index n and N-1-n are exact negatives.
std::vector<double> symmetric_offsets(std::size_t n_modes, double half_span_width);

/// Random chaotic beam: Rayleigh amplitudes whose mean power follows the
/// Gaussian envelope (summing to mean_intensity) and uniform phases.
SpectralModes sample_chaotic_modes(const SpectralEnvelope& env, std::size_t n_modes, double half_span,
                                   std::uint64_t seed, std::uint64_t realization = 0);

/// The anti-correlated partner beam: offsets and phases negated, amplitudes
/// kept. Its baseband field is the pointwise complex conjugate of the input's.
SpectralModes conjugate_partner_modes(const SpectralModes& m);

struct PulseOptions {
    /// Phases uniform on [-jitter·π, jitter·π); 0 gives a transform-limited pulse.
    double phase_jitter = 0.0;
    /// Mode grid covers ±half_span·b.
    double half_span = 6.0;
};

/// Gaussian mode profile c_n ∝ exp(-Δω²/(4 b²)) with Σc_n² = 1. With zero
/// jitter the intensity is a pulse at t = 0 of RMS duration 1/(2b).
SpectralModes pulse_modes(const SpectralEnvelope& env, std::size_t n_modes, double pulse_bandwidth,
                          std::uint64_t seed, const PulseOptions& opts = {});

/// Evaluates mode sums on a fixed grid. The basis exp(-iΔω_n t_k) is computed
/// once, so each synthesis is a dense complex matrix-vector product.
class FieldSynthesizer {
  public:
    /// Throws NyquistError when step·max|Δω| ≥ π.
    FieldSynthesizer(std::span<const double> offsets, const TimeGrid& grid);

    const TimeGrid& grid() const { return grid_; }
    std::size_t n_modes() const { return offsets_.size(); }

    /// `m.offsets` must equal the offsets this synthesizer was built for.
    ComplexFieldSeries synthesize(const SpectralModes& m) const;

    /// Low-level form; out.size() == grid().count.
    void synthesize_into(std::span<const double> amplitudes, std::span<const double> phases,
                         std::span<Complex> out) const;

    /// Writes |E(t_k)|² directly.
    void intensity_into(std::span<const double> amplitudes, std::span<const double> phases,
                        std::span<double> out) const;

  private:
    void accumulate(std::span<const double> amplitudes, std::span<const double> phases,
                    std::vector<double>& re, std::vector<double>& im) const;

    TimeGrid grid_;
    std::vector<double> offsets_;
    // Mode-major: basis_re_[n * count + k] = cos(Δω_n t_k).
    std::vector<double> basis_re_;
    std::vector<double> basis_im_;
};

/// samples[k] = Σ c_n e^{iφ_n} e^{-iΔω_n t_k}.
ComplexFieldSeries synthesize_field(const SpectralModes& m, const TimeGrid& grid);

RealSeries intensity(const ComplexFieldSeries& f);

ComplexFieldSeries conjugate_series(const ComplexFieldSeries& f);

/// Stationary complex AR(1) process with ⟨|E|²⟩ = mean_intensity and
/// g¹(τ) = exp(-|τ|/coherence_time). Requires grid.step < coherence_time/5.
ComplexFieldSeries markov_chaotic_field(const TimeGrid& grid, double coherence_time, double mean_intensity,
                                        std::uint64_t seed, std::uint64_t realization = 0);

/// RMS spread of a nonnegative profile about its centroid.
double rms_duration(const RealSeries& s);

}  // namespace pslight
