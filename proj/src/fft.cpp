#include "fpkit/fft.hpp"

#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace fpkit {

std::vector<std::complex<double>> fft2d(const std::vector<double>& plane, int h, int w) {
    if (h <= 0 || w <= 0 || plane.size() != static_cast<std::size_t>(h) * w)
        throw std::invalid_argument("fft2d: shape mismatch");
    std::vector<std::complex<double>> in(plane.size()), out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) in[i] = plane[i];
    // FFTW's planner is not thread-safe; execution is.
    static std::mutex planner_mutex;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_2d(h, w,
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace fpkit
