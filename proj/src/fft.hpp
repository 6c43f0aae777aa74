#pragma once

#include <span>

#include "pslight/types.hpp"

namespace pslight::detail {

/// In-place unnormalized DFT. Forward uses exp(-2πi jk/M), inverse exp(+2πi jk/M).
void fft_forward(std::span<Complex> data);
void fft_inverse(std::span<Complex> data);

}  // namespace pslight::detail
