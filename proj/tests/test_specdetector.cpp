#include <doctest.h>

#include <cmath>
#include <random>

#include "fpkit/specdetector.hpp"

#include "helpers.hpp"

using namespace fpkit;

namespace {

ImageBuffer white_noise(int side, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ImageBuffer img(side, side, 1);
    for (double& v : img.data) v = uni(gen);
    return img;
}

SpectralFeatures toy_feature(double v) {
    SpectralFeatures f;
    f.radial_profile = {v};
    return f;
}

} // namespace

TEST_CASE("white noise gives a flat radial profile") {
    const int crop = 256, bins = 64, trials = 100;
    std::vector<double> mean(bins, 0.0);
    for (int t = 0; t < trials; ++t) {
        const auto f = spectral_features(white_noise(crop, 4000 + t), crop, bins);
        for (int b = 0; b < bins; ++b) mean[b] += f.radial_profile[b];
    }
    for (int b = 0; b < bins; ++b) {
        mean[b] /= trials;
        CHECK(mean[b] == doctest::Approx(1.0 / bins).epsilon(0.10));
    }
}

TEST_CASE("pure cosine concentrates profile mass at radius crop/8") {
    const int crop = 256, bins = 64;
    ImageBuffer img(crop, crop, 1);
    for (int y = 0; y < crop; ++y)
        for (int x = 0; x < crop; ++x)
            img.at(y, x, 0) = 0.5 + 0.4 * std::cos(2.0 * M_PI * x / 8.0);
    const auto f = spectral_features(img, crop, bins);
    // radius crop/8 = 32 falls in bin floor((32-1)/((128-1)/64))
    const int expected_bin = static_cast<int>((crop / 8.0 - 1.0) / ((crop / 2.0 - 1.0) / bins));
    int argmax = 0;
    for (int b = 1; b < bins; ++b)
        if (f.radial_profile[b] > f.radial_profile[argmax]) argmax = b;
    CHECK(argmax == expected_bin);
    CHECK(f.radial_profile[argmax] > 0.5); // dominant share of the unit sum
}

TEST_CASE("profile is invariant to horizontal mirroring") {
    const int crop = 64;
    const ImageBuffer img = testutil::smooth_background(crop, 123);
    ImageBuffer mirrored(crop, crop, 1);
    for (int y = 0; y < crop; ++y)
        for (int x = 0; x < crop; ++x) mirrored.at(y, x, 0) = img.at(y, crop - 1 - x, 0);
    const auto a = spectral_features(img, crop);
    const auto b = spectral_features(mirrored, crop);
    for (std::size_t i = 0; i < a.radial_profile.size(); ++i)
        CHECK_NEAR(a.radial_profile[i], b.radial_profile[i], 1e-9);
}

TEST_CASE("profile is invariant to a global brightness offset") {
    const int crop = 64;
    ImageBuffer img = testutil::smooth_background(crop, 124);
    ImageBuffer brighter = img;
    for (double& v : brighter.data) v += 0.07;
    const auto a = spectral_features(img, crop);
    const auto b = spectral_features(brighter, crop);
    for (std::size_t i = 0; i < a.radial_profile.size(); ++i)
        CHECK_NEAR(a.radial_profile[i], b.radial_profile[i], 1e-9);
}

TEST_CASE("profile sums to one and is non-negative") {
    const auto f = spectral_features(white_noise(64, 5), 64);
    double sum = 0.0;
    for (double v : f.radial_profile) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("undersized image is rejected") {
    CHECK_THROWS(spectral_features(white_noise(32, 6), 64));
}

TEST_CASE("training separates a linearly separable 1-D toy set") {
    std::vector<SpectralFeatures> feats;
    std::vector<Label> labels;
    for (double v : {0.0, 0.1, 0.2}) {
        feats.push_back(toy_feature(v));
        labels.push_back({ImageClass::real, "none"});
    }
    for (double v : {0.8, 0.9, 1.0}) {
        feats.push_back(toy_feature(v));
        labels.push_back({ImageClass::synthetic, "g"});
    }
    const LogRegModel m = train_logreg(feats, labels, 0.0, 3000, 1.0);
    for (std::size_t i = 0; i < feats.size(); ++i) {
        const bool predicted_fake = m.score(feats[i]) > 0.5;
        CHECK(predicted_fake == (labels[i].cls == ImageClass::synthetic));
    }
}

TEST_CASE("flipping all labels negates weights and bias") {
    std::vector<SpectralFeatures> feats;
    std::vector<Label> labels, flipped;
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        SpectralFeatures f;
        f.radial_profile = {uni(gen), uni(gen), uni(gen)};
        feats.push_back(f);
        const bool fake = i % 2 == 0;
        labels.push_back({fake ? ImageClass::synthetic : ImageClass::real, fake ? "g" : "none"});
        flipped.push_back({fake ? ImageClass::real : ImageClass::synthetic, fake ? "none" : "g"});
    }
    const LogRegModel a = train_logreg(feats, labels, 1e-3, 500, 0.5);
    const LogRegModel b = train_logreg(feats, flipped, 1e-3, 500, 0.5);
    for (std::size_t k = 0; k < a.weights.size(); ++k)
        CHECK_NEAR(a.weights[k], -b.weights[k], 1e-6);
    CHECK_NEAR(a.bias, -b.bias, 1e-6);
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 gen(32);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int dim = 5, n = 12;
    std::vector<SpectralFeatures> feats(n);
    std::vector<char> targets(n);
    for (int i = 0; i < n; ++i) {
        feats[i].radial_profile.resize(dim);
        for (double& v : feats[i].radial_profile) v = uni(gen);
        targets[i] = i % 2;
    }
    const double l2 = 0.01, h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> w(dim);
        for (double& v : w) v = uni(gen);
        const double b = uni(gen);
        std::vector<double> grad_w;
        double grad_b;
        logreg_gradient(feats, targets, w, b, l2, grad_w, grad_b);
        for (int k = 0; k <= dim; ++k) {
            auto perturbed = [&](double delta) {
                std::vector<double> w2 = w;
                double b2 = b;
                if (k < dim)
                    w2[k] += delta;
                else
                    b2 += delta;
                return logreg_loss(feats, targets, w2, b2, l2);
            };
            const double fd = (perturbed(h) - perturbed(-h)) / (2.0 * h);
            const double analytic = k < dim ? grad_w[k] : grad_b;
            CHECK(std::abs(fd - analytic) / std::max(1e-8, std::abs(fd)) < 1e-5);
        }
    }
}

TEST_CASE("training loss is non-increasing after the first iterations") {
    std::vector<SpectralFeatures> feats;
    std::vector<Label> labels;
    std::vector<char> targets;
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        SpectralFeatures f;
        f.radial_profile = {uni(gen), uni(gen)};
        const bool fake = i % 2 == 0;
        if (fake) f.radial_profile[0] += 0.3;
        feats.push_back(f);
        labels.push_back({fake ? ImageClass::synthetic : ImageClass::real, fake ? "g" : "none"});
        targets.push_back(fake ? 1 : 0);
    }
    double prev = 1e300;
    for (int iters = 10; iters <= 200; iters += 10) {
        const LogRegModel m = train_logreg(feats, labels, 1e-4, iters, 0.1);
        CHECK(m.meta.final_loss <= prev + 1e-12);
        prev = m.meta.final_loss;
    }
}

TEST_CASE("single-class training is rejected") {
    std::vector<SpectralFeatures> feats = {toy_feature(0.1), toy_feature(0.2)};
    std::vector<Label> labels = {{ImageClass::real, "none"}, {ImageClass::real, "none"}};
    CHECK_THROWS(train_logreg(feats, labels, 0.0, 10, 0.1));
}

TEST_CASE("zero-weight model scores sigmoid(bias)") {
    LogRegModel m;
    m.weights.assign(64, 0.0);
    m.bias = 0.3;
    const auto img = white_noise(64, 7);
    const double s = score_image(m, img, 64);
    CHECK(s == doctest::Approx(1.0 / (1.0 + std::exp(-0.3))).epsilon(1e-12));
    CHECK(score_image(m, img, 64) == s); // deterministic
}

TEST_CASE("model save/load round-trip is field-identical") {
    testutil::TempDir dir;
    LogRegModel m;
    m.weights = {0.25, -1.5, 3.25e-7};
    m.bias = -0.125;
    m.meta = {123, 1e-4, 0.456789};
    save_model(m, dir.file("m.txt"));
    const LogRegModel back = load_model(dir.file("m.txt"));
    CHECK(back.weights == m.weights);
    CHECK(back.bias == m.bias);
    CHECK(back.meta.iterations == m.meta.iterations);
    CHECK(back.meta.l2_lambda == m.meta.l2_lambda);
    CHECK(back.meta.final_loss == m.meta.final_loss);
}

TEST_CASE("wrong magic header is a version error") {
    testutil::TempDir dir;
    testutil::write_text(dir.file("bad.txt"), "NOTAMODEL\nbins 2\n");
    CHECK_THROWS(load_model(dir.file("bad.txt")));
}

TEST_CASE("dimension mismatch between model and features is an error") {
    LogRegModel m;
    m.weights.assign(32, 0.0);
    SpectralFeatures f;
    f.radial_profile.assign(64, 1.0 / 64);
    CHECK_THROWS(m.score(f));
}
