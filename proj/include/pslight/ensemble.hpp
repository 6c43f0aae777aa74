#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "pslight/types.hpp"

namespace pslight {

/// How beam 2 is built from beam 1's modes.
enum class BeamPairing {
    phase_sensitive,  // anti-correlated phases and frequencies: E₂ = E₁*
    identical,        // beam 2 is a copy of beam 1
};

/// Parameters shared by every realization of a stationary chaotic ensemble.
struct EnsembleSpec {
    std::uint64_t seed = 20091;
    std::size_t n_modes = 256;
    std::size_t n_realizations = 10000;
    double half_span = 4.0;
    SpectralEnvelope envelope;
    TimeGrid grid;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

SpectralModes realization_modes(const EnsembleSpec& spec, std::size_t realization);

/// Beam 2's source modes for the given pairing.
SpectralModes partner_modes(const SpectralModes& beam1, BeamPairing pairing);

inline constexpr std::size_t kBlockSize = 64;

/// Splits [0, n) into fixed blocks of kBlockSize, runs body(partial, r) for
/// every index with one fresh partial per block, and returns the partials in
/// block order. The partition does not depend on the thread count, so an
/// in-order merge of the result is reproducible.
template <class Partial, class Make, class Body>
std::vector<Partial> run_blocks(std::size_t n, unsigned threads, Make make, Body body) {
    const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<Partial> partials;
    partials.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) partials.push_back(make());

    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_blocks, 1)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            try {
                const std::size_t end = std::min(n, (b + 1) * kBlockSize);
                for (std::size_t r = b * kBlockSize; r < end; ++r) body(partials[b], r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n_blocks;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return partials;
}

}  // namespace pslight
