#include "pslight/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pslight/mode_field.hpp"

namespace pslight {

using detail::require;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Time mean of i1[k]·i2[k+s] over the overlap of the window with itself.
double lagged_mean(std::span<const double> i1, std::span<const double> i2, long s) {
    const long count = static_cast<long>(i1.size());
    const long begin = std::max(0L, -s);
    const long end = std::min(count, count - s);
    const double* a = i1.data() + begin;
    const double* b = i2.data() + (begin + s);
    const long len = end - begin;
    double acc = 0.0;
    for (long k = 0; k < len; ++k) acc += a[k] * b[k];
    return acc / static_cast<double>(end - begin);
}

double mean_of(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double background_of(std::span<const double> lags, std::span<const double> g2, double min_lag) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (std::abs(lags[i]) > min_lag) {
            acc += g2[i];
            ++n;
        }
    }
    return n == 0 ? kNaN : acc / static_cast<double>(n);
}

std::ptrdiff_t zero_lag_index(std::span<const double> lags) {
    for (std::size_t i = 0; i < lags.size(); ++i)
        if (lags[i] == 0.0) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

}  // namespace

std::vector<long> lag_steps(const TimeGrid& grid, std::span<const double> lags) {
    grid.validate();
    require(!lags.empty(), "correlation: lag list is empty");
    std::vector<long> steps(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) {
        require(std::isfinite(lags[i]), "correlation: non-finite lag");
        const double ratio = lags[i] / grid.step;
        const double rounded = std::round(ratio);
        require(std::abs(ratio - rounded) <= 1e-6 * std::max(1.0, std::abs(rounded)),
                "correlation: lag " + std::to_string(lags[i]) + " is not a multiple of the grid step");
        require(std::abs(rounded) < static_cast<double>(grid.count),
                "correlation: lag " + std::to_string(lags[i]) + " exceeds the window");
        steps[i] = static_cast<long>(rounded);
        if (i > 0) require(steps[i] > steps[i - 1], "correlation: lags must be strictly increasing");
    }
    return steps;
}

CorrelationAccumulator::CorrelationAccumulator(const TimeGrid& grid, std::span<const double> lags)
    : grid_(grid), lags_(lags.begin(), lags.end()), steps_(lag_steps(grid, lags)) {
    sum_a_.assign(lags_.size(), 0.0);
    sum_aa_.assign(lags_.size(), 0.0);
    sum_a1_.assign(lags_.size(), 0.0);
    sum_a2_.assign(lags_.size(), 0.0);
}

void CorrelationAccumulator::add(std::span<const double> i1, std::span<const double> i2) {
    require(i1.size() == grid_.count && i2.size() == grid_.count, "correlation: series length does not match grid");
    const double m1 = mean_of(i1);
    const double m2 = mean_of(i2);
    for (std::size_t j = 0; j < steps_.size(); ++j) {
        const double a = lagged_mean(i1, i2, steps_[j]);
        sum_a_[j] += a;
        sum_aa_[j] += a * a;
        sum_a1_[j] += a * m1;
        sum_a2_[j] += a * m2;
    }
    sum_1_ += m1;
    sum_2_ += m2;
    sum_11_ += m1 * m1;
    sum_22_ += m2 * m2;
    sum_12_ += m1 * m2;
    ++n_;
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& other) {
    require(other.grid_ == grid_ && other.steps_ == steps_, "correlation: merging accumulators with different lags");
    for (std::size_t j = 0; j < steps_.size(); ++j) {
        sum_a_[j] += other.sum_a_[j];
        sum_aa_[j] += other.sum_aa_[j];
        sum_a1_[j] += other.sum_a1_[j];
        sum_a2_[j] += other.sum_a2_[j];
    }
    sum_1_ += other.sum_1_;
    sum_2_ += other.sum_2_;
    sum_11_ += other.sum_11_;
    sum_22_ += other.sum_22_;
    sum_12_ += other.sum_12_;
    n_ += other.n_;
}

CorrelationEstimate CorrelationAccumulator::finish(const CorrelationOptions& opts) const {
    require(n_ >= 2, "correlation: need at least two realizations");
    const double n = static_cast<double>(n_);
    const double m1 = sum_1_ / n;
    const double m2 = sum_2_ / n;
    require(m1 > 0.0 && m2 > 0.0, "correlation: mean intensity is zero");
    const double norm = m1 * m2;
    const double var1 = std::max(0.0, (sum_11_ - n * m1 * m1) / (n - 1.0));
    const double var2 = std::max(0.0, (sum_22_ - n * m2 * m2) / (n - 1.0));
    const double cov12 = (sum_12_ - n * m1 * m2) / (n - 1.0);

    CorrelationEstimate est;
    est.lags = lags_;
    est.n_realizations = n_;
    est.mean1 = m1;
    est.mean2 = m2;
    est.mean1_stderr = std::sqrt(var1 / n);
    est.mean2_stderr = std::sqrt(var2 / n);
    est.g2.resize(lags_.size());
    est.std_error.resize(lags_.size());
    est.raw.resize(lags_.size());
    for (std::size_t j = 0; j < lags_.size(); ++j) {
        const double a = sum_a_[j] / n;
        const double g = a / norm;
        const double var_a = (sum_aa_[j] - n * a * a) / (n - 1.0);
        const double cov_a1 = (sum_a1_[j] - n * a * m1) / (n - 1.0);
        const double cov_a2 = (sum_a2_[j] - n * a * m2) / (n - 1.0);
        // Delta method for the ratio a / (m1·m2).
        const double var_g = var_a / (norm * norm) + g * g * var1 / (m1 * m1) + g * g * var2 / (m2 * m2) -
                             2.0 * g * cov_a1 / (norm * m1) - 2.0 * g * cov_a2 / (norm * m2) +
                             2.0 * g * g * cov12 / norm;
        est.raw[j] = a;
        est.g2[j] = g;
        est.std_error[j] = std::sqrt(std::max(0.0, var_g) / n);
    }
    est.background = background_of(est.lags, est.g2, opts.background_min_lag);
    const auto zero = zero_lag_index(est.lags);
    est.peak_height = zero >= 0 ? est.g2[static_cast<std::size_t>(zero)] : kNaN;
    est.peak_fwhm = peak_fwhm(est.lags, est.g2, est.background);
    return est;
}

CorrelationEstimate cross_correlation(std::span<const RealSeries> ensemble1, std::span<const RealSeries> ensemble2,
                                      std::span<const double> lags, const CorrelationOptions& opts) {
    require(ensemble1.size() == ensemble2.size(), "correlation: ensembles differ in size");
    require(ensemble1.size() >= 2, "correlation: need at least two realizations");
    const TimeGrid grid = ensemble1.front().grid;
    CorrelationAccumulator acc(grid, lags);
    for (std::size_t r = 0; r < ensemble1.size(); ++r) {
        require(ensemble1[r].grid == grid && ensemble2[r].grid == grid, "correlation: realizations use different grids");
        acc.add(ensemble1[r].values, ensemble2[r].values);
    }
    return acc.finish(opts);
}

CorrelationEstimate auto_correlation(std::span<const RealSeries> ensemble, std::span<const double> lags,
                                     const CorrelationOptions& opts) {
    return cross_correlation(ensemble, ensemble, lags, opts);
}

double per_realization_intensity_gap(const ComplexFieldSeries& f1, const ComplexFieldSeries& f2) {
    require(f1.grid == f2.grid, "intensity gap: fields use different grids");
    const RealSeries i1 = intensity(f1);
    const RealSeries i2 = intensity(f2);
    double gap = 0.0;
    for (std::size_t k = 0; k < i1.values.size(); ++k) gap = std::max(gap, std::abs(i1.values[k] - i2.values[k]));
    const double scale = std::max(mean_of(i1.values), std::numeric_limits<double>::min());
    return gap / scale;
}

double peak_fwhm(std::span<const double> lags, std::span<const double> values, double background) {
    require(lags.size() == values.size(), "fwhm: lags and values differ in length");
    const auto zero = zero_lag_index(lags);
    if (zero < 0 || !std::isfinite(background)) return kNaN;
    const auto z = static_cast<std::size_t>(zero);
    const double height = values[z] - background;
    if (!(height > 0.0)) return 0.0;
    const double half = background + 0.5 * height;

    auto crossing = [&](std::size_t from, std::size_t to) {
        return lags[from] + (values[from] - half) / (values[from] - values[to]) * (lags[to] - lags[from]);
    };
    double right = kNaN;
    for (std::size_t i = z + 1; i < lags.size(); ++i) {
        if (values[i] <= half) {
            right = crossing(i - 1, i);
            break;
        }
    }
    double left = kNaN;
    for (std::size_t i = z; i-- > 0;) {
        if (values[i] <= half) {
            left = crossing(i + 1, i);
            break;
        }
    }
    // A one-sided lag grid is read as a symmetric peak.
    if (z + 1 == lags.size()) right = -left;
    if (z == 0) left = -right;
    return right - left;
}

double profile_rms_width(std::span<const double> lags, std::span<const double> values, double baseline) {
    require(lags.size() == values.size(), "rms width: lags and values differ in length");
    double w = 0.0, first = 0.0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        const double v = std::max(values[i] - baseline, 0.0);
        w += v;
        first += v * lags[i];
    }
    require(w > 0.0, "rms width: profile has no weight above baseline");
    const double centroid = first / w;
    double second = 0.0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        const double v = std::max(values[i] - baseline, 0.0);
        second += v * (lags[i] - centroid) * (lags[i] - centroid);
    }
    return std::sqrt(second / w);
}

ZeroLagSample zero_lag_sample(std::span<const double> i1, std::span<const double> i2) {
    require(i1.size() == i2.size() && !i1.empty(), "zero-lag sample: series differ in length");
    return {lagged_mean(i1, i2, 0), mean_of(i1), mean_of(i2)};
}

ZeroLagDeficit paired_zero_lag_deficit(std::span<const ZeroLagSample> reference,
                                       std::span<const ZeroLagSample> dispersed) {
    require(reference.size() == dispersed.size(), "deficit: sample sets differ in size");
    require(reference.size() >= 2, "deficit: need at least two realizations");
    const double n = static_cast<double>(reference.size());

    struct Means {
        double product = 0.0, mean1 = 0.0, mean2 = 0.0;
    };
    auto means = [n](std::span<const ZeroLagSample> s) {
        Means m;
        for (const auto& x : s) {
            m.product += x.product;
            m.mean1 += x.mean1;
            m.mean2 += x.mean2;
        }
        m.product /= n;
        m.mean1 /= n;
        m.mean2 /= n;
        return m;
    };
    const Means ref = means(reference);
    const Means dis = means(dispersed);
    const double g_ref = ref.product / (ref.mean1 * ref.mean2);
    const double g_dis = dis.product / (dis.mean1 * dis.mean2);

    // Linearized influence of each realization on each ratio, differenced.
    auto influence = [](const ZeroLagSample& x, const Means& m, double g) {
        return (x.product - m.product) / (m.mean1 * m.mean2) - g * (x.mean1 - m.mean1) / m.mean1 -
               g * (x.mean2 - m.mean2) / m.mean2;
    };
    double ss = 0.0;
    for (std::size_t r = 0; r < reference.size(); ++r) {
        const double d = influence(reference[r], ref, g_ref) - influence(dispersed[r], dis, g_dis);
        ss += d * d;
    }

    ZeroLagDeficit out;
    out.reference = g_ref;
    out.dispersed = g_dis;
    out.deficit = g_ref - g_dis;
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
    out.raw_deficit = ref.product - dis.product;
    return out;
}

}  // namespace pslight
