#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pslight/dispersion.hpp"
#include "pslight/ensemble.hpp"
#include "pslight/types.hpp"

namespace pslight {

struct CorrelationOptions {
    /// Lags with |τ| strictly above this feed the background estimate.
    double background_min_lag = 10.0;
};

/// Normalized intensity correlation g2(τ) = ⟨I₁(t)I₂(t+τ)⟩ / (⟨I₁⟩⟨I₂⟩).
struct CorrelationEstimate {
    std::vector<double> lags;
    std::vector<double> g2;
    std::vector<double> std_error;
    std::vector<double> raw;  // unnormalized ⟨I₁(t)I₂(t+τ)⟩
    std::size_t n_realizations = 0;
    double background = 0.0;  // NaN when no lag reaches the background region
    double peak_height = 0.0;
    double peak_fwhm = 0.0;
    double mean1 = 0.0;
    double mean2 = 0.0;
    double mean1_stderr = 0.0;
    double mean2_stderr = 0.0;

    double peak_to_background() const { return peak_height / background; }
};

/// Converts lag times to whole grid steps. Throws std::invalid_argument for
/// lags off the grid, out of the window, or not strictly increasing.
std::vector<long> lag_steps(const TimeGrid& grid, std::span<const double> lags);

/// Mergeable sums behind the correlation estimator. Each add() is one
/// realization: its time-averaged lagged products and window means.
class CorrelationAccumulator {
  public:
    CorrelationAccumulator(const TimeGrid& grid, std::span<const double> lags);

    void add(std::span<const double> i1, std::span<const double> i2);
    void merge(const CorrelationAccumulator& other);
    std::size_t size() const { return n_; }

    /// Needs at least two realizations.
    CorrelationEstimate finish(const CorrelationOptions& opts = {}) const;

  private:
    TimeGrid grid_;
    std::vector<double> lags_;
    std::vector<long> steps_;
    std::size_t n_ = 0;
    std::vector<double> sum_a_, sum_aa_, sum_a1_, sum_a2_;
    double sum_1_ = 0.0, sum_2_ = 0.0, sum_11_ = 0.0, sum_22_ = 0.0, sum_12_ = 0.0;
};

CorrelationEstimate cross_correlation(std::span<const RealSeries> ensemble1, std::span<const RealSeries> ensemble2,
                                      std::span<const double> lags, const CorrelationOptions& opts = {});

CorrelationEstimate auto_correlation(std::span<const RealSeries> ensemble, std::span<const double> lags,
                                     const CorrelationOptions& opts = {});

/// max_k |I₁(t_k) - I₂(t_k)| / max(mean I₁, tiny).
double per_realization_intensity_gap(const ComplexFieldSeries& f1, const ComplexFieldSeries& f2);

/// Full width at half maximum of (values - background) around the lag-0
/// peak, by linear interpolation of the half-level crossings. 0 when there
/// is no peak above background, NaN when a crossing is not reached.
double peak_fwhm(std::span<const double> lags, std::span<const double> values, double background);

/// RMS spread of max(values - baseline, 0) about its centroid.
double profile_rms_width(std::span<const double> lags, std::span<const double> values, double baseline = 0.0);

/// One realization's zero-lag statistics: time means of I₁I₂, I₁ and I₂.
struct ZeroLagSample {
    double product = 0.0;
    double mean1 = 0.0;
    double mean2 = 0.0;
};

ZeroLagSample zero_lag_sample(std::span<const double> i1, std::span<const double> i2);

struct ZeroLagDeficit {
    double reference = 0.0;    // g2(0) without media
    double dispersed = 0.0;    // g2(0) with media
    double deficit = 0.0;      // reference - dispersed
    double std_error = 0.0;    // paired over realizations
    double raw_deficit = 0.0;  // ⟨I₁I₂⟩ - ⟨I₁'I₂'⟩, unnormalized
};

/// Paired (common-random-numbers) difference of the two zero-lag ratio
/// estimators. Both spans are indexed by realization.
ZeroLagDeficit paired_zero_lag_deficit(std::span<const ZeroLagSample> reference,
                                       std::span<const ZeroLagSample> dispersed);

struct SweepRow {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double deficit = 0.0;
    double std_error = 0.0;
    double raw_deficit = 0.0;
};

/// g2(0) deficit for every (β₁, β₂) pair, with the same realizations reused
/// at every point. β values are reduced dispersions applied with L = 1.
std::vector<SweepRow> dispersion_sweep(const EnsembleSpec& spec, std::span<const std::pair<double, double>> beta_grid,
                                       BeamPairing pairing = BeamPairing::phase_sensitive);

struct PairCorrelation {
    CorrelationEstimate reference;  // beams straight from the sources
    CorrelationEstimate dispersed;  // after med1 (beam 1) and med2 (beam 2)
    ZeroLagDeficit zero_lag;
};

/// Reference and dispersed correlation curves of one ensemble of beam pairs;
/// both curves use the same realizations.
PairCorrelation pair_correlation(const EnsembleSpec& spec, std::span<const double> lags,
                                 const DispersiveMedium& med1, const DispersiveMedium& med2,
                                 BeamPairing pairing = BeamPairing::phase_sensitive,
                                 const CorrelationOptions& opts = {});

/// deficit ≈ a + b1·β₁ + b2·β₂ + c1·β₁² + c2·β₂² + d·β₁β₂
struct QuadraticFit {
    double a = 0.0, b1 = 0.0, b2 = 0.0, c1 = 0.0, c2 = 0.0, d = 0.0;
    double residual_rms = 0.0;

    double evaluate(double beta1, double beta2) const {
        return a + b1 * beta1 + b2 * beta2 + c1 * beta1 * beta1 + c2 * beta2 * beta2 + d * beta1 * beta2;
    }
};

/// Least squares over the rows. Throws RankError for fewer than six
/// distinct points or a design without full column rank.
QuadraticFit fit_quadratic_surface(std::span<const SweepRow> rows);

/// Grid-only check run before any simulation.
void check_quadratic_design(std::span<const std::pair<double, double>> beta_grid);

}  // namespace pslight
