#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace pslight::detail {

namespace {

// The FFTW planner is not re-entrant; execution on private buffers is.
std::mutex planner_mutex;

void transform(std::span<Complex> data, int sign) {
    if (data.empty()) return;
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
}

}  // namespace

void fft_forward(std::span<Complex> data) { transform(data, FFTW_FORWARD); }
void fft_inverse(std::span<Complex> data) { transform(data, FFTW_BACKWARD); }

}  // namespace pslight::detail
