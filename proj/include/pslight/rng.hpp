#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace pslight {

/// Stream tags keep independent draws for the same (seed, realization)
/// from overlapping.
enum class StreamTag : std::uint32_t {
    modes = 1,
    markov = 2,
    pulse = 3,
};

/// Deterministic generator for substream (seed, index, tag).
///
/// Every realization of an ensemble owns one substream, so results do not
/// depend on which thread produced a realization or in which order.
class SubstreamRng {
  public:
    SubstreamRng(std::uint64_t seed, std::uint64_t index, StreamTag tag = StreamTag::modes) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(tag)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }

    /// Pair of independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pslight
