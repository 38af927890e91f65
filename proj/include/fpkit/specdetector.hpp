#pragma once

#include <string>
#include <vector>

#include "fpkit/image.hpp"
#include "fpkit/manifest.hpp"

namespace fpkit {

// Azimuthally averaged log power spectrum, normalized to unit sum.
struct SpectralFeatures {
    std::vector<double> radial_profile;
};

constexpr int kDefaultFeatureBins = 64;

// Grayscale conversion, central crop (never resize), mean removal,
// 2D FFT power spectrum, azimuthal average into `bins` equal-width radius
// bins from just above DC to Nyquist, log1p, unit-sum normalization.
SpectralFeatures spectral_features(const ImageBuffer& image, int crop,
                                   int bins = kDefaultFeatureBins);

struct TrainMeta {
    int iterations = 0;
    double l2_lambda = 0.0;
    double final_loss = 0.0;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    TrainMeta meta;

    double score(const SpectralFeatures& f) const;
};

// Full-batch gradient descent on L2-regularized logistic loss, zero
// initialization, fixed iteration count; bit-reproducible.
LogRegModel train_logreg(const std::vector<SpectralFeatures>& features,
                         const std::vector<Label>& labels, double l2_lambda,
                         int iterations, double learning_rate);

// Mean cross-entropy plus (l2/2)*|w|^2, and its analytic gradient.
double logreg_loss(const std::vector<SpectralFeatures>& features,
                   const std::vector<char>& targets, const std::vector<double>& w,
                   double b, double l2_lambda);
void logreg_gradient(const std::vector<SpectralFeatures>& features,
                     const std::vector<char>& targets, const std::vector<double>& w,
                     double b, double l2_lambda, std::vector<double>& grad_w,
                     double& grad_b);

double score_image(const LogRegModel& model, const ImageBuffer& image, int crop);

void save_model(const LogRegModel& model, const std::string& path);
LogRegModel load_model(const std::string& path);

} // namespace fpkit
