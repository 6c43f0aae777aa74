#pragma once

#include <cstddef>

#include "pslight/types.hpp"

namespace pslight {

/// Dispersive medium in reduced units (σ_ω = 1). A mode at offset Δω picks
/// up the spectral phase (α·Δω + β·Δω²)·L; the k₀L global phase is dropped.
struct DispersiveMedium {
    double group_delay_coeff = 0.0;  // α, signed
    double dispersion_coeff = 0.0;   // β, signed
    double length = 1.0;             // L

    void validate() const;
    double phase(double offset) const {
        return (group_delay_coeff * offset + dispersion_coeff * offset * offset) * length;
    }
    bool is_identity() const { return length == 0.0 || (group_delay_coeff == 0.0 && dispersion_coeff == 0.0); }

    /// Medium with dimensionless dispersion D = β·L·σ_ω².
    static DispersiveMedium from_reduced(double reduced_dispersion, double rms_width = 1.0, double length = 1.0);
};

/// Mode path: φ_n → φ_n + (αΔω_n + βΔω_n²)L.
SpectralModes apply_dispersion_modes(const SpectralModes& m, const DispersiveMedium& med);

/// Spectral-transform path: DFT, multiply by exp(i(αΔω + βΔω²)L) on the
/// baseband frequency grid Δω_j = -2πj/(count·step), inverse DFT.
/// Treats the window as one period of the field.
ComplexFieldSeries apply_dispersion_series(const ComplexFieldSeries& f, const DispersiveMedium& med);

/// One term of the classical double sum after both media:
/// c_n c_n' e^{i(φ_n-φ_n')} e^{-i(Δω_n t - Δω_n' t')} e^{i(p₁(Δω_n) + p₂(Δω_n'))}
/// where p is DispersiveMedium::phase. (c_n, φ_n, Δω_n) come from m1[n] and
/// (c_n', φ_n', Δω_n') from m2[n_prime]; pass beam 1's modes twice for the
/// textbook form. The carrier factor is omitted. Throws std::out_of_range.
Complex cross_term(const SpectralModes& m1, const SpectralModes& m2, std::size_t n, std::size_t n_prime,
                   const DispersiveMedium& med1, const DispersiveMedium& med2, double t, double t_prime);

}  // namespace pslight
