#include "pslight/ensemble.hpp"

#include <cmath>

#include "pslight/mode_field.hpp"

namespace pslight {

using detail::require;

void EnsembleSpec::validate() const {
    envelope.validate();
    grid.validate();
    require(n_modes >= 1, "ensemble: n_modes must be >= 1");
    require(n_realizations >= 2, "ensemble: n_realizations must be >= 2");
    require(std::isfinite(half_span) && half_span > 0.0, "ensemble: half_span must be finite and > 0");
}

SpectralModes realization_modes(const EnsembleSpec& spec, std::size_t realization) {
    return sample_chaotic_modes(spec.envelope, spec.n_modes, spec.half_span, spec.seed, realization);
}

SpectralModes partner_modes(const SpectralModes& beam1, BeamPairing pairing) {
    return pairing == BeamPairing::phase_sensitive ? conjugate_partner_modes(beam1) : beam1;
}

}  // namespace pslight
