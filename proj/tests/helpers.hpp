#pragma once

// Test-only oracles and fixtures. Everything here is independent of the
// library code paths it is used to check.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fpkit/image.hpp"
#include "fpkit/manifest.hpp"

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

namespace testutil {

// Brute-force pairwise Mann-Whitney statistic.
inline double pairwise_auc(const std::vector<double>& real_scores,
                           const std::vector<double>& fake_scores) {
    double acc = 0.0;
    for (double f : fake_scores)
        for (double r : real_scores) acc += f > r ? 1.0 : (f == r ? 0.5 : 0.0);
    return acc / (static_cast<double>(real_scores.size()) * fake_scores.size());
}

// Negative log-likelihood of the Platt model with prior-corrected targets.
inline double platt_nll(double a, double b, const std::vector<double>& scores,
                        const std::vector<fpkit::Label>& labels) {
    int n_pos = 0, n_neg = 0;
    for (const auto& l : labels)
        (l.cls == fpkit::ImageClass::synthetic ? n_pos : n_neg)++;
    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);
    double nll = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double t = labels[i].cls == fpkit::ImageClass::synthetic ? t_pos : t_neg;
        const double z = a * scores[i] + b;
        // -t*log(p) - (1-t)*log(1-p) with p = 1/(1+e^z), written stably:
        const double log1pez = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        nll += t * log1pez + (1.0 - t) * (log1pez - z);
    }
    return nll;
}

// Coarse-to-fine grid search minimizing platt_nll; refined until the grid
// step drops below `step_tol` in both coordinates.
inline std::pair<double, double> platt_grid_oracle(const std::vector<double>& scores,
                                                   const std::vector<fpkit::Label>& labels,
                                                   double step_tol = 1e-5) {
    double ca = 0.0, cb = 0.0, half = 100.0;
    const int grid = 41;
    // gentle halving keeps the correlated (a,b) likelihood valley inside
    // the refinement window
    while (2.0 * half / (grid - 1) > step_tol) {
        double best = std::numeric_limits<double>::infinity();
        double best_a = ca, best_b = cb;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double a = ca - half + 2.0 * half * i / (grid - 1);
                const double b = cb - half + 2.0 * half * j / (grid - 1);
                const double v = platt_nll(a, b, scores, labels);
                if (v < best) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        ca = best_a;
        cb = best_b;
        half *= 0.5;
    }
    return {ca, cb};
}

// Smooth random background: white noise blurred by a box filter, rescaled
// into [0.2, 0.8]. Decoupled from the library's gaussian denoiser.
inline fpkit::ImageBuffer smooth_background(int side, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> noise(static_cast<std::size_t>(side) * side);
    for (double& v : noise) v = uni(gen);
    fpkit::ImageBuffer img(side, side, 1);
    const int r = 4;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            double s = 0.0;
            int n = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= side || xx < 0 || xx >= side) continue;
                    s += noise[static_cast<std::size_t>(yy) * side + xx];
                    ++n;
                }
            img.at(y, x, 0) = 0.2 + 0.6 * (s / n);
        }
    return img;
}

// Impulse grid with the given period, added in place.
inline void plant_grid(fpkit::ImageBuffer& img, int period, double amplitude) {
    for (int y = 0; y < img.height; y += period)
        for (int x = 0; x < img.width; x += period)
            for (int c = 0; c < img.channels; ++c) img.at(y, x, c) += amplitude;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("fpkit_test_" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

} // namespace testutil
