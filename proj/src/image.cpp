#include "fpkit/image.hpp"

#include <algorithm>
#include <cmath>

namespace fpkit {

ImageBuffer central_crop(const ImageBuffer& img, int crop) {
    if (crop <= 0) throw std::invalid_argument("central_crop: crop must be positive");
    if (img.height < crop || img.width < crop)
        throw std::runtime_error("central_crop: image smaller than crop size");
    const int y0 = (img.height - crop) / 2;
    const int x0 = (img.width - crop) / 2;
    ImageBuffer out(crop, crop, img.channels);
    for (int y = 0; y < crop; ++y)
        for (int x = 0; x < crop; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(y, x, c) = img.at(y0 + y, x0 + x, c);
    return out;
}

ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.channels == 1) return img;
    ImageBuffer out(img.height, img.width, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double s = 0.0;
            for (int c = 0; c < img.channels; ++c) s += img.at(y, x, c);
            out.at(y, x, 0) = s / img.channels;
        }
    return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int out_h, int out_w) {
    if (out_h <= 0 || out_w <= 0)
        throw std::invalid_argument("resize_bilinear: bad output size");
    ImageBuffer out(out_h, out_w, img.channels);
    const double sy = static_cast<double>(img.height) / out_h;
    const double sx = static_cast<double>(img.width) / out_w;
    for (int y = 0; y < out_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(y0, x0, c) * (1 - wx) + img.at(y0, x1, c) * wx;
                const double bot = img.at(y1, x0, c) * (1 - wx) + img.at(y1, x1, c) * wx;
                out.at(y, x, c) = top * (1 - wy) + bot * wy;
            }
        }
    }
    return out;
}

} // namespace fpkit
