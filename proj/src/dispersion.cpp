#include "pslight/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace pslight {

using detail::require;

void DispersiveMedium::validate() const {
    require(std::isfinite(group_delay_coeff), "medium: group_delay_coeff must be finite");
    require(std::isfinite(dispersion_coeff), "medium: dispersion_coeff must be finite");
    require(std::isfinite(length) && length >= 0.0, "medium: length must be finite and >= 0");
}

DispersiveMedium DispersiveMedium::from_reduced(double reduced_dispersion, double rms_width, double length) {
    require(std::isfinite(rms_width) && rms_width > 0.0, "medium: rms_width must be > 0");
    require(std::isfinite(length) && length > 0.0, "medium: length must be > 0 to carry a reduced dispersion");
    DispersiveMedium med;
    med.dispersion_coeff = reduced_dispersion / (length * rms_width * rms_width);
    med.length = length;
    med.validate();
    return med;
}

SpectralModes apply_dispersion_modes(const SpectralModes& m, const DispersiveMedium& med) {
    m.validate();
    med.validate();
    SpectralModes out = m;
    for (std::size_t n = 0; n < out.size(); ++n) out.phases[n] = m.phases[n] + med.phase(m.offsets[n]);
    return out;
}

ComplexFieldSeries apply_dispersion_series(const ComplexFieldSeries& f, const DispersiveMedium& med) {
    f.validate();
    med.validate();
    ComplexFieldSeries out = f;
    if (med.is_identity()) return out;

    const std::size_t count = f.grid.count;
    const double bin_width = 2.0 * std::numbers::pi / (static_cast<double>(count) * f.grid.step);
    detail::fft_forward(out.samples);
    const double norm = 1.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j) {
        // Signed bin index in [-count/2, count/2); bins j and count-j map to
        // exactly opposite offsets.
        const long long signed_j = j < (count + 1) / 2 ? static_cast<long long>(j)
                                                       : static_cast<long long>(j) - static_cast<long long>(count);
        // Inverse transform uses exp(+2πi jk/M) = exp(-iΔω_j k·step).
        const double offset = -static_cast<double>(signed_j) * bin_width;
        out.samples[j] *= std::polar(norm, med.phase(offset));
    }
    detail::fft_inverse(out.samples);
    return out;
}

Complex cross_term(const SpectralModes& m1, const SpectralModes& m2, std::size_t n, std::size_t n_prime,
                   const DispersiveMedium& med1, const DispersiveMedium& med2, double t, double t_prime) {
    if (n >= m1.size() || n_prime >= m2.size()) throw std::out_of_range("cross_term: mode index out of range");
    const double w = m1.offsets[n];
    const double w_prime = m2.offsets[n_prime];
    const double phase = (m1.phases[n] - m2.phases[n_prime]) - (w * t - w_prime * t_prime) +
                         (med1.phase(w) + med2.phase(w_prime));
    return std::polar(m1.amplitudes[n] * m2.amplitudes[n_prime], phase);
}

}  // namespace pslight
