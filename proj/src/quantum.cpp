#include "pslight/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pslight/mode_field.hpp"

namespace pslight {

using detail::require;

void BiphotonSpectrum::validate() const {
    require(!offsets.empty(), "biphoton: need at least one mode");
    require(amplitudes.size() == offsets.size(), "biphoton: offsets and amplitudes differ in length");
    double norm = 0.0;
    for (std::size_t n = 0; n < offsets.size(); ++n) {
        require(std::isfinite(offsets[n]) && std::isfinite(amplitudes[n]), "biphoton: non-finite entry");
        norm += amplitudes[n] * amplitudes[n];
    }
    require(std::abs(norm - 1.0) < 1e-9, "biphoton: amplitudes must satisfy sum c_n^2 = 1");
}

namespace {

BiphotonSpectrum normalized(double carrier, std::vector<double> offsets, std::vector<double> amplitudes) {
    const double energy = std::inner_product(amplitudes.begin(), amplitudes.end(), amplitudes.begin(), 0.0);
    require(energy > 0.0, "biphoton: amplitudes are all zero");
    const double scale = 1.0 / std::sqrt(energy);
    for (double& c : amplitudes) c *= scale;
    return {carrier, std::move(offsets), std::move(amplitudes)};
}

struct MediaSums {
    double linear;
    double quadratic;
};

MediaSums media_sums(const DispersiveMedium& med1, const DispersiveMedium& med2) {
    med1.validate();
    med2.validate();
    return {med1.group_delay_coeff * med1.length - med2.group_delay_coeff * med2.length,
            med1.dispersion_coeff * med1.length + med2.dispersion_coeff * med2.length};
}

Complex amplitude_sum(const BiphotonSpectrum& s, double tau, const MediaSums& sums) {
    Complex acc(0.0, 0.0);
    for (std::size_t n = 0; n < s.offsets.size(); ++n) {
        const double w = s.offsets[n];
        acc += std::polar(s.amplitudes[n], -w * tau + sums.linear * w + sums.quadratic * w * w);
    }
    return acc;
}

}  // namespace

BiphotonSpectrum gaussian_biphoton_spectrum(const SpectralEnvelope& env, std::size_t n_modes, double half_span) {
    env.validate();
    require(std::isfinite(half_span) && half_span > 0.0, "biphoton: half_span must be > 0");
    std::vector<double> offsets = symmetric_offsets(n_modes, half_span * env.rms_width);
    std::vector<double> amplitudes(offsets.size());
    const double two_var = 2.0 * env.rms_width * env.rms_width;
    for (std::size_t n = 0; n < offsets.size(); ++n) amplitudes[n] = std::exp(-offsets[n] * offsets[n] / two_var);
    return normalized(0.0, std::move(offsets), std::move(amplitudes));
}

BiphotonSpectrum biphoton_from_modes(const SpectralModes& m) {
    m.validate();
    return normalized(m.carrier, m.offsets, m.amplitudes);
}

Complex coincidence_amplitude(const BiphotonSpectrum& s, double t, double t_prime, const DispersiveMedium& med1,
                              const DispersiveMedium& med2) {
    s.validate();
    return amplitude_sum(s, t - t_prime, media_sums(med1, med2));
}

CorrelationEstimate coincidence_profile(const BiphotonSpectrum& s, std::span<const double> lags,
                                        const DispersiveMedium& med1, const DispersiveMedium& med2) {
    s.validate();
    require(!lags.empty(), "coincidence profile: lag list is empty");
    for (std::size_t i = 1; i < lags.size(); ++i)
        require(lags[i] > lags[i - 1], "coincidence profile: lags must be strictly increasing");
    const MediaSums sums = media_sums(med1, med2);

    CorrelationEstimate est;
    est.lags.assign(lags.begin(), lags.end());
    est.raw.resize(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) est.raw[i] = std::norm(amplitude_sum(s, lags[i], sums));
    const double peak = *std::max_element(est.raw.begin(), est.raw.end());
    require(peak > 0.0, "coincidence profile: vanishing amplitude on every lag");
    est.g2.resize(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) est.g2[i] = est.raw[i] / peak;
    est.std_error.assign(lags.size(), 0.0);
    est.n_realizations = 1;
    est.background = 0.0;
    est.mean1 = est.mean2 = 1.0;
    const auto zero = std::find(est.lags.begin(), est.lags.end(), 0.0);
    est.peak_height = zero != est.lags.end() ? est.g2[static_cast<std::size_t>(zero - est.lags.begin())]
                                             : std::numeric_limits<double>::quiet_NaN();
    est.peak_fwhm = peak_fwhm(est.lags, est.g2, est.background);
    return est;
}

double gaussian_broadened_rms_width(double w0, double total_quadratic_phase) {
    require(std::isfinite(w0) && w0 > 0.0, "rms width must be > 0");
    const double r = total_quadratic_phase / (w0 * w0);
    return w0 * std::sqrt(1.0 + r * r);
}

ClassicalQuantumReport classical_vs_quantum_report(const CorrelationEstimate& classical,
                                                   const CorrelationEstimate& quantum) {
    require(classical.lags == quantum.lags, "report: classical and quantum lag grids differ");
    ClassicalQuantumReport rep;
    rep.classical_fwhm = classical.peak_fwhm;
    rep.quantum_fwhm = quantum.peak_fwhm;
    rep.width_ratio = classical.peak_fwhm / quantum.peak_fwhm;
    rep.classical_background = classical.background;
    rep.quantum_background = quantum.background;
    rep.classical_peak_to_background = classical.peak_height / classical.background;

    const auto zero = std::find(classical.lags.begin(), classical.lags.end(), 0.0);
    const double zero_err =
        zero != classical.lags.end() ? classical.std_error[static_cast<std::size_t>(zero - classical.lags.begin())] : 0.0;
    const double excess = classical.peak_height - classical.background;
    rep.classical_hbt_peak = std::isfinite(excess) && excess > std::max(0.05 * classical.background, 3.0 * zero_err);
    rep.quantum_all_coincident = quantum.background == 0.0;

    if (rep.classical_hbt_peak) {
        rep.notes.emplace_back("classical: HBT peak of height " + std::to_string(rep.classical_peak_to_background) +
                               " x background; most detection pairs fall at uncorrelated times");
    } else {
        rep.notes.emplace_back("classical: no HBT peak above background");
    }
    rep.notes.emplace_back(
        "classical: intensity product is a double sum over modes n, n'; media act locally and identically on both "
        "beams, so only statistical correlations survive");
    rep.notes.emplace_back(
        "quantum: coincidence amplitude is a single sum over n; dispersion enters only as (beta1 + beta2) and "
        "cancels coherently when beta1 = -beta2");
    if (rep.quantum_all_coincident) rep.notes.emplace_back("quantum: zero background, every pair is coincident");
    return rep;
}

}  // namespace pslight
