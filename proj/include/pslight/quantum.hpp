#pragma once

#include <span>
#include <string>
#include <vector>

#include "pslight/correlation.hpp"
#include "pslight/dispersion.hpp"
#include "pslight/types.hpp"

namespace pslight {

/// Frequency-anticorrelated pair amplitudes: photon 1 at ω₀+Δω_n goes with
/// photon 2 at ω₀-Δω_n, with real amplitude c_n. Σc_n² = 1.
struct BiphotonSpectrum {
    double carrier = 0.0;
    std::vector<double> offsets;
    std::vector<double> amplitudes;

    void validate() const;
};

/// c_n ∝ exp(-Δω²/(2σ²)) on the symmetric mode grid. |A(τ)|² then has the
/// same shape as the classical HBT excess of a beam with envelope σ.
BiphotonSpectrum gaussian_biphoton_spectrum(const SpectralEnvelope& env, std::size_t n_modes, double half_span = 4.0);

/// Uses the mode amplitudes of a classical beam, renormalized.
BiphotonSpectrum biphoton_from_modes(const SpectralModes& m);

/// Σ_n c_n e^{-iΔω_n(t-t')} e^{i(β₁L₁+β₂L₂)Δω_n²}, carrier omitted. The
/// media enter only through the sums β₁L₁+β₂L₂ and α₁L₁-α₂L₂ (photon 2 sits
/// at -Δω_n), each formed once, so media pairs with equal sums give
/// bit-identical amplitudes.
Complex coincidence_amplitude(const BiphotonSpectrum& s, double t, double t_prime, const DispersiveMedium& med1,
                              const DispersiveMedium& med2);

/// |amplitude(τ, 0)|² over the lags, normalized to a peak of 1. Background 0,
/// zero standard errors, FWHM as in the classical estimator.
CorrelationEstimate coincidence_profile(const BiphotonSpectrum& s, std::span<const double> lags,
                                        const DispersiveMedium& med1, const DispersiveMedium& med2);

/// RMS width of a Gaussian profile of initial RMS width w0 (in the
/// coincidence or intensity domain) after total quadratic phase
/// B = Σβ·L: w0·sqrt(1 + (B/w0²)²).
double gaussian_broadened_rms_width(double w0, double total_quadratic_phase);

struct ClassicalQuantumReport {
    double classical_fwhm = 0.0;
    double quantum_fwhm = 0.0;
    double width_ratio = 0.0;  // classical / quantum
    double classical_background = 0.0;
    double quantum_background = 0.0;
    double classical_peak_to_background = 0.0;
    bool classical_hbt_peak = false;
    bool quantum_all_coincident = false;
    std::vector<std::string> notes;
};

/// Lag grids must match exactly.
ClassicalQuantumReport classical_vs_quantum_report(const CorrelationEstimate& classical,
                                                   const CorrelationEstimate& quantum);

}  // namespace pslight
