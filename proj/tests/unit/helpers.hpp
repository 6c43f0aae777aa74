#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pslight/types.hpp"

namespace testing {

inline double max_rel_diff(const std::vector<pslight::Complex>& a, const std::vector<pslight::Complex>& b) {
    double scale = 0.0, worst = 0.0;
    for (const auto& z : a) scale = std::max(scale, std::abs(z));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst / scale;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline pslight::TimeGrid grid(double start, double step, std::size_t count) {
    pslight::TimeGrid g;
    g.start = start;
    g.step = step;
    g.count = count;
    return g;
}

inline pslight::SpectralModes modes(std::vector<double> offsets, std::vector<double> amplitudes,
                                    std::vector<double> phases) {
    pslight::SpectralModes m;
    m.offsets = std::move(offsets);
    m.amplitudes = std::move(amplitudes);
    m.phases = std::move(phases);
    return m;
}

// Tiny deterministic generator for property tests, independent of the library RNG.
struct SplitMix {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t lo, std::size_t hi) { return lo + next() % (hi - lo + 1); }
};

}  // namespace testing
