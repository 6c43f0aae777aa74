#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pslight {

using Complex = std::complex<double>;

/// Base for failures where a numerical guard refused to produce a result
/// (aliasing, window too short). The CLI maps these to exit code 3.
class NumericalGuardError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NyquistError : public NumericalGuardError {
  public:
    using NumericalGuardError::NumericalGuardError;
};

class WindowError : public NumericalGuardError {
  public:
    using NumericalGuardError::NumericalGuardError;
};

/// Least-squares design matrix without full column rank.
class RankError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class EnvelopeShape { gaussian };

/// Power spectrum of a stationary chaotic beam.
struct SpectralEnvelope {
    double rms_width = 1.0;       // σ_ω, rad per unit time
    EnvelopeShape shape = EnvelopeShape::gaussian;
    double mean_intensity = 1.0;  // target ⟨I⟩

    void validate() const;
    /// 1/σ_ω; the field autocorrelation is exp(-τ²/(2 τ_c²)).
    double coherence_time() const { return 1.0 / rms_width; }
};

struct TimeGrid {
    double start = 0.0;
    double step = 0.05;
    std::size_t count = 800;

    void validate() const;
    double at(std::size_t k) const { return start + static_cast<double>(k) * step; }
    double duration() const { return static_cast<double>(count) * step; }
    bool operator==(const TimeGrid&) const = default;
};

/// Discrete mode decomposition of one beam. Mode n contributes
/// amplitudes[n]·exp(i phases[n])·exp(-i offsets[n] t) to the baseband field.
struct SpectralModes {
    double carrier = 0.0;  // ω₀, metadata only
    std::vector<double> offsets;
    std::vector<double> amplitudes;
    std::vector<double> phases;

    std::size_t size() const { return offsets.size(); }
    double max_abs_offset() const;
    void validate() const;
};

/// Baseband analytic signal E(t_k) with the carrier exp(-iω₀t) removed.
struct ComplexFieldSeries {
    TimeGrid grid;
    std::vector<Complex> samples;
    double carrier = 0.0;

    void validate() const;
};

struct RealSeries {
    TimeGrid grid;
    std::vector<double> values;

    void validate() const;
};

namespace detail {
[[noreturn]] void fail(const std::string& what);
inline void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
}
}  // namespace detail

}  // namespace pslight
