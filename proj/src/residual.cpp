#include "fpkit/residual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpkit/image_io.hpp"

namespace fpkit {

namespace {

// Half-sample symmetric reflection: ...,x1,x0 | x0,x1,...,x[n-1] | x[n-1],...
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable convolution per channel.
ImageBuffer convolve_separable(const ImageBuffer& img, const std::vector<double>& k) {
    const int radius = static_cast<int>(k.size() / 2);
    ImageBuffer tmp(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d)
                    acc += k[d + radius] * img.at(y, reflect(x + d, img.width), c);
                tmp.at(y, x, c) = acc;
            }
    ImageBuffer out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d)
                    acc += k[d + radius] * tmp.at(reflect(y + d, img.height), x, c);
                out.at(y, x, c) = acc;
            }
    return out;
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// One Haar level along a length-n signal (n even): n/2 averages then n/2
// details, orthonormal scaling.
void haar_forward(std::vector<double>& buf, int n) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    std::vector<double> tmp(n);
    for (int i = 0; i < n / 2; ++i) {
        tmp[i] = (buf[2 * i] + buf[2 * i + 1]) * inv_sqrt2;
        tmp[n / 2 + i] = (buf[2 * i] - buf[2 * i + 1]) * inv_sqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + n, buf.begin());
}

void haar_inverse(std::vector<double>& buf, int n) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    std::vector<double> tmp(n);
    for (int i = 0; i < n / 2; ++i) {
        tmp[2 * i] = (buf[i] + buf[n / 2 + i]) * inv_sqrt2;
        tmp[2 * i + 1] = (buf[i] - buf[n / 2 + i]) * inv_sqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + n, buf.begin());
}

ImageBuffer wavelet_denoise(const ImageBuffer& img, double threshold) {
    // Odd dimensions are extended by edge replication and cropped back.
    const int H = img.height + (img.height % 2);
    const int W = img.width + (img.width % 2);
    ImageBuffer out(img.height, img.width, img.channels);
    std::vector<double> plane(static_cast<std::size_t>(H) * W);
    std::vector<double> line(std::max(H, W));
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                plane[static_cast<std::size_t>(y) * W + x] =
                    img.at(std::min(y, img.height - 1), std::min(x, img.width - 1), c);
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) line[x] = plane[static_cast<std::size_t>(y) * W + x];
            haar_forward(line, W);
            for (int x = 0; x < W; ++x) plane[static_cast<std::size_t>(y) * W + x] = line[x];
        }
        for (int x = 0; x < W; ++x) {
            for (int y = 0; y < H; ++y) line[y] = plane[static_cast<std::size_t>(y) * W + x];
            haar_forward(line, H);
            for (int y = 0; y < H; ++y) plane[static_cast<std::size_t>(y) * W + x] = line[y];
        }
        // Soft-threshold every band except the LL approximation.
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                if (y < H / 2 && x < W / 2) continue;
                double& v = plane[static_cast<std::size_t>(y) * W + x];
                v = soft_threshold(v, threshold);
            }
        for (int x = 0; x < W; ++x) {
            for (int y = 0; y < H; ++y) line[y] = plane[static_cast<std::size_t>(y) * W + x];
            haar_inverse(line, H);
            for (int y = 0; y < H; ++y) plane[static_cast<std::size_t>(y) * W + x] = line[y];
        }
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) line[x] = plane[static_cast<std::size_t>(y) * W + x];
            haar_inverse(line, W);
            for (int x = 0; x < W; ++x) plane[static_cast<std::size_t>(y) * W + x] = line[x];
        }
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                out.at(y, x, c) = plane[static_cast<std::size_t>(y) * W + x];
    }
    return out;
}

} // namespace

void DenoiserConfig::validate() const {
    if (kind == DenoiserKind::gaussian && gaussian_sigma <= 0.0)
        throw std::invalid_argument("gaussian_sigma must be > 0");
    if (kind == DenoiserKind::wavelet_soft && wavelet_threshold < 0.0)
        throw std::invalid_argument("wavelet_threshold must be >= 0");
    if (kind == DenoiserKind::external && external_dir.empty())
        throw std::invalid_argument("external denoiser needs external_dir");
}

ImageBuffer denoise(const ImageBuffer& image, const DenoiserConfig& config,
                    const std::string& source_name) {
    if (image.size() == 0) throw std::invalid_argument("denoise: empty image");
    config.validate();
    switch (config.kind) {
    case DenoiserKind::gaussian:
        return convolve_separable(image, gaussian_kernel(config.gaussian_sigma));
    case DenoiserKind::wavelet_soft:
        return wavelet_denoise(image, config.wavelet_threshold);
    case DenoiserKind::external: {
        if (source_name.empty())
            throw std::invalid_argument("external denoiser needs the source file name");
        ImageBuffer d = load_image(config.external_dir + "/" + source_name);
        if (!d.same_shape(image))
            throw std::runtime_error("external denoised image shape mismatch: " + source_name);
        return d;
    }
    }
    throw std::logic_error("unreachable");
}

NoiseResidual extract_residual(const ImageBuffer& image, const DenoiserConfig& config,
                               const std::string& source_name) {
    ImageBuffer den = denoise(image, config, source_name);
    NoiseResidual r;
    r.height = image.height;
    r.width = image.width;
    r.channels = image.channels;
    r.data.resize(image.data.size());
    for (std::size_t i = 0; i < image.data.size(); ++i)
        r.data[i] = image.data[i] - den.data[i];
    return r;
}

} // namespace fpkit
