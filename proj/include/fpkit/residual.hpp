#pragma once

#include <string>

#include "fpkit/image.hpp"

namespace fpkit {

enum class DenoiserKind { gaussian, wavelet_soft, external };

struct DenoiserConfig {
    DenoiserKind kind = DenoiserKind::gaussian;
    double gaussian_sigma = 1.0;
    double wavelet_threshold = 0.02;
    std::string external_dir; // denoised counterparts, same file name

    void validate() const;
};

// Scene-content estimate f(X). Gaussian: separable convolution, kernel
// radius ceil(4*sigma), symmetric-reflection borders (sum-preserving).
// Wavelet: one-level separable Haar, soft-threshold on the detail bands.
// External: load the denoised counterpart of `source_name` from
// external_dir (required for this kind only).
ImageBuffer denoise(const ImageBuffer& image, const DenoiserConfig& config,
                    const std::string& source_name = "");

// R = X - f(X), elementwise, never clamped.
NoiseResidual extract_residual(const ImageBuffer& image, const DenoiserConfig& config,
                               const std::string& source_name = "");

} // namespace fpkit
