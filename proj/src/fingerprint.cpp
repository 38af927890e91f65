#include "fpkit/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fpkit/fft.hpp"
#include "fpkit/image_io.hpp"

namespace fpkit {

std::vector<double> FingerprintEstimate::estimate() const {
    if (count == 0) throw std::logic_error("fingerprint estimate queried with count 0");
    std::vector<double> out(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) out[i] = sum[i] / count;
    return out;
}

void accumulate(FingerprintEstimate& acc, const NoiseResidual& residual) {
    if (acc.empty()) {
        acc.height = residual.height;
        acc.width = residual.width;
        acc.channels = residual.channels;
        acc.sum.assign(residual.data.size(), 0.0);
    } else if (acc.height != residual.height || acc.width != residual.width ||
               acc.channels != residual.channels) {
        throw std::runtime_error("accumulate: residual shape mismatch");
    }
    for (std::size_t i = 0; i < residual.data.size(); ++i) acc.sum[i] += residual.data[i];
    ++acc.count;
}

FingerprintEstimate estimate_fingerprint(const DatasetManifest& manifest,
                                         const DenoiserConfig& denoiser, int crop) {
    FingerprintEstimate acc;
    for (const auto& entry : manifest.entries) {
        ImageBuffer img = load_image(manifest.resolve(entry));
        if (img.height < crop || img.width < crop)
            throw std::runtime_error("image smaller than analysis crop: " + entry.path);
        ImageBuffer cropped = central_crop(img, crop);
        accumulate(acc, extract_residual(cropped, denoiser, entry.path));
    }
    return acc;
}

AmplitudeSpectrum amplitude_spectrum(const FingerprintEstimate& f, SpectrumScale scale) {
    const std::vector<double> est = f.estimate();
    const int H = f.height, W = f.width;
    std::vector<double> plane(static_cast<std::size_t>(H) * W, 0.0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double s = 0.0;
            for (int c = 0; c < f.channels; ++c)
                s += est[(static_cast<std::size_t>(y) * W + x) * f.channels + c];
            plane[static_cast<std::size_t>(y) * W + x] = s / f.channels;
        }
    double mean = 0.0;
    for (double v : plane) mean += v;
    mean /= plane.size();
    for (double& v : plane) v -= mean;

    const auto spec = fft2d(plane, H, W);
    AmplitudeSpectrum out;
    out.height = H;
    out.width = W;
    out.scale = scale;
    out.values.resize(plane.size());
    const int cy = H / 2, cx = W / 2;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double m = std::abs(spec[static_cast<std::size_t>(y) * W + x]);
            if (scale == SpectrumScale::log1p) m = std::log1p(m);
            const int sy = (y + cy) % H;
            const int sx = (x + cx) % W;
            out.values[static_cast<std::size_t>(sy) * W + sx] = m;
        }
    return out;
}

std::vector<SpectralPeak> detect_peaks(const AmplitudeSpectrum& s,
                                       double prominence_threshold, int neighborhood) {
    if (prominence_threshold <= 1.0)
        throw std::invalid_argument("prominence_threshold must be > 1");
    if (neighborhood < 3 || neighborhood % 2 == 0)
        throw std::invalid_argument("neighborhood must be odd and >= 3");
    const int H = s.height, W = s.width;
    const int cy = H / 2, cx = W / 2;
    const int r = neighborhood / 2;
    const double global_max = *std::max_element(s.values.begin(), s.values.end());
    if (global_max <= 0.0) return {};
    const double median_floor = 1e-12 * global_max;
    // Bins this far below the global maximum are FFT rounding noise.
    const double magnitude_floor = 1e-9 * global_max;

    std::vector<SpectralPeak> peaks;
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(neighborhood) * neighborhood);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (std::abs(y - cy) <= 1 && std::abs(x - cx) <= 1) continue; // DC zone
            const double m = s.at(y, x);
            if (m < magnitude_floor) continue;
            bool strict_max = true;
            window.clear();
            for (int dy = -r; dy <= r && strict_max; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= H || xx < 0 || xx >= W) continue;
                    const double n = s.at(yy, xx);
                    window.push_back(n);
                    if ((dy != 0 || dx != 0) && n >= m) {
                        strict_max = false;
                        break;
                    }
                }
            if (!strict_max) continue;
            std::nth_element(window.begin(), window.begin() + window.size() / 2, window.end());
            double med = window[window.size() / 2];
            if (window.size() % 2 == 0) {
                const double lo = *std::max_element(window.begin(),
                                                    window.begin() + window.size() / 2);
                med = 0.5 * (med + lo);
            }
            const double prominence = m / std::max(med, median_floor);
            if (prominence >= prominence_threshold)
                peaks.push_back({y - cy, x - cx, m, prominence});
        }
    std::sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
    });
    return peaks;
}

void render_spectrum(const AmplitudeSpectrum& s, const std::string& path) {
    const auto [lo_it, hi_it] = std::minmax_element(s.values.begin(), s.values.end());
    const double lo = *lo_it, hi = *hi_it;
    ImageBuffer img(s.height, s.width, 1);
    if (hi > lo)
        for (std::size_t i = 0; i < s.values.size(); ++i)
            img.data[i] = (s.values[i] - lo) / (hi - lo);
    save_png(img, path);
}

void save_peaks_csv(const std::vector<SpectralPeak>& peaks, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write peaks CSV: " + path);
    out << "u,v,magnitude,prominence\n";
    out.precision(17);
    for (const auto& p : peaks)
        out << p.u << ',' << p.v << ',' << p.magnitude << ',' << p.prominence << '\n';
}

} // namespace fpkit
