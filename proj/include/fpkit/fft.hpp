#pragma once

#include <complex>
#include <vector>

namespace fpkit {

// Unnormalized forward 2D DFT of a real h x w plane (row-major).
// Output is row-major, same layout, DC at (0,0).
std::vector<std::complex<double>> fft2d(const std::vector<double>& plane, int h, int w);

} // namespace fpkit
