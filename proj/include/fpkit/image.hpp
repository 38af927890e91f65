#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpkit {

// H x W x C image, row-major, interleaved channels, samples in [0,1]
// after decode. Operations that can leave the range say so explicitly.
struct ImageBuffer {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    ImageBuffer() = default;
    ImageBuffer(int h, int w, int c, double fill = 0.0)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, fill) {
        if (h <= 0 || w <= 0 || (c != 1 && c != 3))
            throw std::invalid_argument("ImageBuffer: bad shape");
    }

    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t size() const { return data.size(); }
    bool same_shape(const ImageBuffer& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

// Signed residual, same layout as ImageBuffer, no range restriction.
struct NoiseResidual {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;
};

ImageBuffer central_crop(const ImageBuffer& img, int crop);

// Mean over channels; returns a 1-channel buffer (values may be any real
// if the input was, callers feed [0,1] images).
ImageBuffer to_gray(const ImageBuffer& img);

// Bilinear resize to out_h x out_w, half-pixel-center convention.
ImageBuffer resize_bilinear(const ImageBuffer& img, int out_h, int out_w);

} // namespace fpkit
