#include "pslight/types.hpp"

#include <algorithm>
#include <cmath>

namespace pslight {

namespace detail {
void fail(const std::string& what) { throw std::invalid_argument(what); }
}  // namespace detail

using detail::require;

void SpectralEnvelope::validate() const {
    require(std::isfinite(rms_width) && rms_width > 0.0, "envelope rms_width must be finite and > 0");
    require(std::isfinite(mean_intensity) && mean_intensity > 0.0,
            "envelope mean_intensity must be finite and > 0");
}

void TimeGrid::validate() const {
    require(std::isfinite(start), "grid start must be finite");
    require(std::isfinite(step) && step > 0.0, "grid step must be finite and > 0");
    require(count >= 2, "grid count must be >= 2");
}

double SpectralModes::max_abs_offset() const {
    double m = 0.0;
    for (double w : offsets) m = std::max(m, std::abs(w));
    return m;
}

void SpectralModes::validate() const {
    require(!offsets.empty(), "modes: need at least one mode");
    require(amplitudes.size() == offsets.size() && phases.size() == offsets.size(),
            "modes: offsets, amplitudes and phases differ in length");
    for (std::size_t n = 0; n < offsets.size(); ++n) {
        require(std::isfinite(offsets[n]), "modes: non-finite offset");
        require(std::isfinite(amplitudes[n]) && amplitudes[n] >= 0.0, "modes: amplitudes must be finite and >= 0");
        require(std::isfinite(phases[n]), "modes: non-finite phase");
        if (n > 0) require(offsets[n] > offsets[n - 1], "modes: offsets must be strictly increasing");
    }
}

void ComplexFieldSeries::validate() const {
    grid.validate();
    require(samples.size() == grid.count, "field: sample count does not match grid");
    for (const Complex& z : samples)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), "field: non-finite sample");
}

void RealSeries::validate() const {
    grid.validate();
    require(values.size() == grid.count, "series: value count does not match grid");
    for (double v : values) require(std::isfinite(v) && v >= 0.0, "series: values must be finite and >= 0");
}

}  // namespace pslight
