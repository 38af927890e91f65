#include "fpkit/specdetector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fpkit/fft.hpp"

namespace fpkit {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

SpectralFeatures spectral_features(const ImageBuffer& image, int crop, int bins) {
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (image.height < crop || image.width < crop)
        throw std::runtime_error("image smaller than feature crop");
    ImageBuffer gray = to_gray(central_crop(image, crop));

    double mean = 0.0;
    for (double v : gray.data) mean += v;
    mean /= gray.data.size();
    for (double& v : gray.data) v -= mean;

    const auto spec = fft2d(gray.data, crop, crop);

    // Azimuthal average of |X|^2 over radius bins spanning [1, Nyquist].
    const double r_min = 1.0;
    const double r_max = crop / 2.0;
    const double bin_width = (r_max - r_min) / bins;
    std::vector<double> power(bins, 0.0);
    std::vector<int> count(bins, 0);
    for (int y = 0; y < crop; ++y) {
        const int u = y <= crop / 2 ? y : y - crop; // signed frequency
        for (int x = 0; x < crop; ++x) {
            const int v = x <= crop / 2 ? x : x - crop;
            const double r = std::sqrt(static_cast<double>(u) * u + static_cast<double>(v) * v);
            if (r < r_min || r > r_max) continue;
            int b = static_cast<int>((r - r_min) / bin_width);
            b = std::min(b, bins - 1);
            const double m = std::abs(spec[static_cast<std::size_t>(y) * crop + x]);
            power[b] += m * m;
            ++count[b];
        }
    }
    SpectralFeatures f;
    f.radial_profile.resize(bins);
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double avg = count[b] > 0 ? power[b] / count[b] : 0.0;
        f.radial_profile[b] = std::log1p(avg);
        total += f.radial_profile[b];
    }
    if (total > 0.0)
        for (double& v : f.radial_profile) v /= total;
    return f;
}

double LogRegModel::score(const SpectralFeatures& f) const {
    if (f.radial_profile.size() != weights.size())
        throw std::runtime_error("feature dimension does not match model");
    double z = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * f.radial_profile[i];
    return sigmoid(z);
}

double logreg_loss(const std::vector<SpectralFeatures>& features,
                   const std::vector<char>& targets, const std::vector<double>& w,
                   double b, double l2_lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = b;
        for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * features[i].radial_profile[k];
        // log(1+exp(-z)) evaluated stably
        const double softplus = z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
        loss += targets[i] ? softplus : softplus + z;
    }
    loss /= features.size();
    double wsq = 0.0;
    for (double v : w) wsq += v * v;
    return loss + 0.5 * l2_lambda * wsq;
}

void logreg_gradient(const std::vector<SpectralFeatures>& features,
                     const std::vector<char>& targets, const std::vector<double>& w,
                     double b, double l2_lambda, std::vector<double>& grad_w,
                     double& grad_b) {
    grad_w.assign(w.size(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = b;
        for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * features[i].radial_profile[k];
        const double err = sigmoid(z) - (targets[i] ? 1.0 : 0.0);
        for (std::size_t k = 0; k < w.size(); ++k) grad_w[k] += err * features[i].radial_profile[k];
        grad_b += err;
    }
    const double inv_n = 1.0 / features.size();
    for (std::size_t k = 0; k < w.size(); ++k)
        grad_w[k] = grad_w[k] * inv_n + l2_lambda * w[k];
    grad_b *= inv_n;
}

LogRegModel train_logreg(const std::vector<SpectralFeatures>& features,
                         const std::vector<Label>& labels, double l2_lambda,
                         int iterations, double learning_rate) {
    if (features.size() != labels.size() || features.empty())
        throw std::invalid_argument("features/labels size mismatch");
    const std::size_t dim = features[0].radial_profile.size();
    std::vector<char> targets(labels.size());
    int n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (features[i].radial_profile.size() != dim)
            throw std::invalid_argument("inconsistent feature dimensions");
        targets[i] = labels[i].cls == ImageClass::synthetic ? 1 : 0;
        (targets[i] ? n_pos : n_neg)++;
    }
    if (n_pos < 2 || n_neg < 2)
        throw std::invalid_argument("need at least 2 examples of each class");

    LogRegModel model;
    model.weights.assign(dim, 0.0);
    model.bias = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
    for (int it = 0; it < iterations; ++it) {
        logreg_gradient(features, targets, model.weights, model.bias, l2_lambda,
                        grad_w, grad_b);
        for (std::size_t k = 0; k < dim; ++k) model.weights[k] -= learning_rate * grad_w[k];
        model.bias -= learning_rate * grad_b;
    }
    model.meta.iterations = iterations;
    model.meta.l2_lambda = l2_lambda;
    model.meta.final_loss =
        logreg_loss(features, targets, model.weights, model.bias, l2_lambda);
    if (!std::isfinite(model.meta.final_loss))
        throw std::runtime_error("training diverged (non-finite loss); lower the learning rate");
    return model;
}

double score_image(const LogRegModel& model, const ImageBuffer& image, int crop) {
    return model.score(
        spectral_features(image, crop, static_cast<int>(model.weights.size())));
}

namespace {
constexpr const char* kModelMagic = "FPKITLR1";
}

void save_model(const LogRegModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    out.precision(17);
    out << kModelMagic << '\n';
    out << "bins " << model.weights.size() << '\n';
    out << "weights";
    for (double w : model.weights) out << ' ' << w;
    out << '\n';
    out << "bias " << model.bias << '\n';
    out << "meta " << model.meta.iterations << ' ' << model.meta.l2_lambda << ' '
        << model.meta.final_loss << '\n';
}

LogRegModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    std::string magic;
    std::getline(in, magic);
    if (!magic.empty() && magic.back() == '\r') magic.pop_back();
    if (magic != kModelMagic)
        throw std::runtime_error("not a recognized model file (bad magic): " + path);
    LogRegModel model;
    std::string key;
    std::size_t bins = 0;
    in >> key >> bins;
    if (key != "bins" || bins == 0 || bins > 1'000'000)
        throw std::runtime_error("corrupt model file: " + path);
    model.weights.resize(bins);
    in >> key;
    if (key != "weights") throw std::runtime_error("corrupt model file: " + path);
    for (double& w : model.weights) in >> w;
    in >> key >> model.bias;
    if (key != "bias") throw std::runtime_error("corrupt model file: " + path);
    in >> key >> model.meta.iterations >> model.meta.l2_lambda >> model.meta.final_loss;
    if (key != "meta" || !in) throw std::runtime_error("corrupt model file: " + path);
    return model;
}

} // namespace fpkit
