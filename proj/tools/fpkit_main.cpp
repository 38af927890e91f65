#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fpkit/eval.hpp"
#include "fpkit/fft.hpp"
#include "fpkit/fingerprint.hpp"
#include "fpkit/image_io.hpp"
#include "fpkit/launder.hpp"
#include "fpkit/manifest.hpp"
#include "fpkit/parallel.hpp"
#include "fpkit/residual.hpp"
#include "fpkit/rng.hpp"
#include "fpkit/specdetector.hpp"

namespace {

using namespace fpkit;

enum class LogLevel { quiet, info, debug };

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = default_thread_count();
    LogLevel log_level = LogLevel::info;
};

void info(const GlobalOpts& g, const std::string& msg) {
    if (g.log_level != LogLevel::quiet) std::cerr << msg << "\n";
}

DenoiserKind parse_denoiser(const std::string& s) {
    if (s == "gaussian") return DenoiserKind::gaussian;
    if (s == "wavelet") return DenoiserKind::wavelet_soft;
    if (s == "external") return DenoiserKind::external;
    throw CLI::ValidationError("--denoiser", "unknown denoiser '" + s + "'");
}

std::vector<SpectralFeatures> extract_manifest_features(const DatasetManifest& m, int crop,
                                                        int bins, int threads) {
    std::vector<SpectralFeatures> feats(m.entries.size());
    parallel_for(m.entries.size(), threads, [&](std::size_t i) {
        feats[i] = spectral_features(load_image(m.resolve(m.entries[i])), crop, bins);
    });
    return feats;
}

// Merge values from a JSON config file into argv; explicit flags win.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end() || it + 1 == args.end()) return args;
    const std::string path = *(it + 1);
    args.erase(it, it + 2);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    for (auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        if (value.is_string())
            args.push_back(value.get<std::string>());
        else if (!value.is_boolean())
            args.push_back(value.dump());
        else if (!value.get<bool>())
            args.pop_back(); // false boolean: drop the flag entirely
    }
    return args;
}

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    // AUC rank implementation vs exhaustive pairwise count.
    {
        bool ok = true;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            SeededRng rng(7, trial);
            std::vector<double> real(5 + trial % 7), fake(5 + trial % 5);
            for (double& v : real) v = std::floor(rng.uniform_double() * 10) / 10;
            for (double& v : fake) v = std::floor(rng.uniform_double() * 10) / 10;
            double wins = 0;
            for (double f : fake)
                for (double r : real) wins += f > r ? 1.0 : (f == r ? 0.5 : 0.0);
            const double brute = wins / (fake.size() * real.size());
            ok = std::abs(roc_auc(real, fake) - brute) < 1e-12;
        }
        check("auc matches pairwise oracle", ok);
    }

    // FFT pure-cosine fixture.
    {
        const int n = 64;
        std::vector<double> plane(static_cast<std::size_t>(n) * n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                plane[static_cast<std::size_t>(y) * n + x] = std::cos(2.0 * M_PI * x / 8.0);
        const auto spec = fft2d(plane, n, n);
        bool ok = true;
        for (int y = 0; y < n && ok; ++y)
            for (int x = 0; x < n; ++x) {
                const double m = std::abs(spec[static_cast<std::size_t>(y) * n + x]);
                const bool hot = y == 0 && (x == 8 || x == n - 8);
                if (hot ? std::abs(m - n * n / 2.0) > 1e-6 * n * n / 2.0 : m > 1e-6) {
                    ok = false;
                    break;
                }
            }
        check("fft cosine fixture", ok);
    }

    // Platt label-swap symmetry.
    {
        std::vector<double> scores = {0.1, 0.2, 0.8, 0.9};
        std::vector<Label> lab = {{ImageClass::real, "none"},
                                  {ImageClass::real, "none"},
                                  {ImageClass::synthetic, "g"},
                                  {ImageClass::synthetic, "g"}};
        std::vector<Label> swapped = {{ImageClass::synthetic, "g"},
                                      {ImageClass::synthetic, "g"},
                                      {ImageClass::real, "none"},
                                      {ImageClass::real, "none"}};
        const auto p1 = platt_fit(scores, lab);
        const auto p2 = platt_fit(scores, swapped);
        check("platt label-swap symmetry",
              p1.a < 0 && std::abs(p1.a + p2.a) < 1e-6 && std::abs(p1.b + p2.b) < 1e-6);
    }

    std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpkit - synthetic-image fingerprint analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global RNG seed (default 0)");
    app.add_option("--threads", g.threads, "worker threads (default: cores)");
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "quiet|info|debug");

    // fingerprint
    auto* fp = app.add_subcommand("fingerprint", "estimate a fingerprint and its spectrum");
    std::string fp_manifest, fp_denoiser = "gaussian", fp_external_dir, fp_scale = "log1p";
    std::string fp_out_spectrum, fp_out_peaks;
    double fp_sigma = 1.0, fp_wavelet_threshold = 0.02, fp_prominence = 5.0;
    int fp_crop = 256, fp_neighborhood = 9;
    fp->add_option("--manifest", fp_manifest)->required();
    fp->add_option("--denoiser", fp_denoiser, "gaussian|wavelet|external");
    fp->add_option("--sigma", fp_sigma, "gaussian sigma");
    fp->add_option("--wavelet-threshold", fp_wavelet_threshold);
    fp->add_option("--external-dir", fp_external_dir);
    fp->add_option("--crop", fp_crop, "central analysis crop (default 256)");
    fp->add_option("--out-spectrum", fp_out_spectrum, "spectrum PNG path");
    fp->add_option("--out-peaks", fp_out_peaks, "peaks CSV path");
    fp->add_option("--scale", fp_scale, "linear|log1p");
    fp->add_option("--prominence", fp_prominence, "peak prominence threshold");
    fp->add_option("--neighborhood", fp_neighborhood, "peak neighborhood bins (odd)");

    // launder
    auto* la = app.add_subcommand("launder", "crop/resize/JPEG laundering of a manifest");
    std::string la_manifest, la_out_dir, la_records, la_out_manifest;
    LaunderParams lp;
    la->add_option("--manifest", la_manifest)->required();
    la->add_option("--out-dir", la_out_dir)->required();
    la->add_option("--target-side", lp.target_side);
    la->add_option("--qf-min", lp.qf_min);
    la->add_option("--qf-max", lp.qf_max);
    la->add_option("--min-crop-frac", lp.min_crop_frac);
    la->add_option("--records-csv", la_records);
    la->add_option("--out-manifest", la_out_manifest, "laundered manifest CSV path");

    // train
    auto* tr = app.add_subcommand("train", "train the spectral logistic-regression detector");
    std::string tr_manifest, tr_out_model;
    int tr_crop = 256, tr_bins = kDefaultFeatureBins, tr_iters = 2000;
    double tr_l2 = 1e-4, tr_lr = 1.0;
    tr->add_option("--manifest", tr_manifest)->required();
    tr->add_option("--crop", tr_crop);
    tr->add_option("--bins", tr_bins);
    tr->add_option("--l2", tr_l2);
    tr->add_option("--iters", tr_iters);
    tr->add_option("--lr", tr_lr);
    tr->add_option("--out-model", tr_out_model)->required();

    // score
    auto* sc = app.add_subcommand("score", "score a manifest with a trained model");
    std::string sc_manifest, sc_model, sc_out;
    int sc_crop = 256;
    sc->add_option("--manifest", sc_manifest)->required();
    sc->add_option("--model", sc_model)->required();
    sc->add_option("--crop", sc_crop);
    sc->add_option("--out-scores", sc_out)->required();

    // eval
    auto* ev = app.add_subcommand("eval", "per-generator Acc/AUC report");
    std::string ev_manifest, ev_scores, ev_out = "markdown", ev_accuracy = "balanced";
    double ev_threshold = 0.5;
    ev->add_option("--manifest", ev_manifest)->required();
    ev->add_option("--scores", ev_scores)->required();
    ev->add_option("--threshold", ev_threshold);
    ev->add_option("--accuracy", ev_accuracy, "balanced|raw");
    ev->add_option("--out", ev_out, "markdown|json");

    // fuse
    auto* fu = app.add_subcommand("fuse", "average several score CSVs");
    std::vector<std::string> fu_inputs;
    std::string fu_out;
    fu->add_option("--scores", fu_inputs, "two or more score CSVs")->required()->expected(-2);
    fu->add_option("--out", fu_out)->required();

    // calibrate
    auto* ca = app.add_subcommand("calibrate", "Platt calibration from a labeled subset");
    std::string ca_scores, ca_manifest, ca_out_params, ca_apply_to, ca_out_scores;
    bool ca_per_generator = false;
    ca->add_option("--scores", ca_scores)->required();
    ca->add_option("--manifest", ca_manifest, "calibration subset with labels")->required();
    ca->add_option("--out-params", ca_out_params, "fitted {a,b} JSON path");
    ca->add_option("--apply-to", ca_apply_to, "score CSV to transform (pooled fit only)");
    ca->add_option("--out-scores", ca_out_scores, "output CSV for --apply-to");
    ca->add_flag("--per-generator", ca_per_generator, "fit one (a,b) per generator");

    auto* st = app.add_subcommand("selftest", "run the embedded invariant checks");

    std::vector<std::string> raw_args(argv + 1, argv + argc);
    try {
        raw_args = apply_config_file(raw_args);
        std::vector<const char*> cargs = {argv[0]};
        for (const auto& s : raw_args) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    g.log_level = log_level == "quiet"   ? LogLevel::quiet
                  : log_level == "debug" ? LogLevel::debug
                                         : LogLevel::info;

    try {
        if (st->parsed()) return run_selftest();

        if (fp->parsed()) {
            DenoiserConfig cfg;
            cfg.kind = parse_denoiser(fp_denoiser);
            cfg.gaussian_sigma = fp_sigma;
            cfg.wavelet_threshold = fp_wavelet_threshold;
            cfg.external_dir = fp_external_dir;
            const DatasetManifest m = load_manifest(fp_manifest);
            info(g, "estimating fingerprint from " + std::to_string(m.entries.size()) +
                        " images (seed " + std::to_string(g.seed) + ")");
            const FingerprintEstimate est = estimate_fingerprint(m, cfg, fp_crop);
            const SpectrumScale scale =
                fp_scale == "linear" ? SpectrumScale::linear : SpectrumScale::log1p;
            const AmplitudeSpectrum spec = amplitude_spectrum(est, scale);
            if (!fp_out_spectrum.empty()) render_spectrum(spec, fp_out_spectrum);
            if (!fp_out_peaks.empty())
                save_peaks_csv(detect_peaks(spec, fp_prominence, fp_neighborhood), fp_out_peaks);
            return 0;
        }

        if (la->parsed()) {
            lp.global_seed = g.seed;
            const DatasetManifest m = load_manifest(la_manifest);
            info(g, "laundering " + std::to_string(m.entries.size()) + " images (seed " +
                        std::to_string(g.seed) + ")");
            const LaunderOutput out = launder_manifest(m, lp, la_out_dir, g.threads);
            if (!la_records.empty()) save_records_csv(out.records, la_records);
            if (!la_out_manifest.empty()) save_manifest(out.manifest, la_out_manifest);
            for (const auto& f : out.failures)
                std::cerr << "failed: " << f.path << ": " << f.message << "\n";
            return out.failures.empty() ? 0 : 2;
        }

        if (tr->parsed()) {
            const DatasetManifest m = load_manifest(tr_manifest);
            const auto feats = extract_manifest_features(m, tr_crop, tr_bins, g.threads);
            std::vector<Label> labels;
            labels.reserve(m.entries.size());
            for (const auto& e : m.entries) labels.push_back(e.label);
            const LogRegModel model = train_logreg(feats, labels, tr_l2, tr_iters, tr_lr);
            save_model(model, tr_out_model);
            info(g, "trained on " + std::to_string(m.entries.size()) +
                        " images, final loss " + std::to_string(model.meta.final_loss));
            return 0;
        }

        if (sc->parsed()) {
            const DatasetManifest m = load_manifest(sc_manifest);
            const LogRegModel model = load_model(sc_model);
            const auto feats = extract_manifest_features(
                m, sc_crop, static_cast<int>(model.weights.size()), g.threads);
            ScoreSet scores;
            scores.detector_name = "spec";
            scores.records.resize(m.entries.size());
            for (std::size_t i = 0; i < m.entries.size(); ++i)
                scores.records[i] = {m.entries[i].path, model.score(feats[i])};
            save_scores(scores, sc_out);
            return 0;
        }

        if (ev->parsed()) {
            const DatasetManifest m = load_manifest(ev_manifest);
            const ScoreSet s = load_scores(ev_scores);
            const AccuracyMode mode =
                ev_accuracy == "raw" ? AccuracyMode::raw : AccuracyMode::balanced;
            const EvalReport r = build_report(m, s, ev_threshold, mode);
            std::cout << (ev_out == "json" ? report_json(r) : report_markdown(r)) << "\n";
            return 0;
        }

        if (fu->parsed()) {
            std::vector<ScoreSet> sets;
            sets.reserve(fu_inputs.size());
            for (const auto& p : fu_inputs) sets.push_back(load_scores(p));
            save_scores(fuse_scores(sets), fu_out);
            return 0;
        }

        if (ca->parsed()) {
            const DatasetManifest m = load_manifest(ca_manifest);
            const ScoreSet s = load_scores(ca_scores);
            std::unordered_map<std::string, double> by_path;
            for (const auto& r : s.records) by_path[r.path] = r.score;
            auto collect = [&](auto&& keep) {
                std::vector<double> scores;
                std::vector<Label> labels;
                for (const auto& e : m.entries) {
                    if (!keep(e)) continue;
                    auto it = by_path.find(e.path);
                    if (it == by_path.end())
                        throw std::runtime_error("no score for calibration image " + e.path);
                    scores.push_back(it->second);
                    labels.push_back(e.label);
                }
                return std::make_pair(scores, labels);
            };

            nlohmann::json params_json;
            CalibrationParams pooled;
            if (ca_per_generator) {
                std::set<std::string> gens;
                for (const auto& e : m.entries)
                    if (e.label.cls == ImageClass::synthetic) gens.insert(e.label.generator);
                for (const auto& gen : gens) {
                    auto [scores, labels] = collect([&](const ManifestEntry& e) {
                        return e.label.cls == ImageClass::real || e.label.generator == gen;
                    });
                    const CalibrationParams p = platt_fit(scores, labels);
                    params_json[gen] = {{"a", p.a}, {"b", p.b}, {"converged", p.converged}};
                }
            } else {
                auto [scores, labels] = collect([](const ManifestEntry&) { return true; });
                pooled = platt_fit(scores, labels);
                params_json = {{"a", pooled.a}, {"b", pooled.b}, {"converged", pooled.converged}};
                if (!pooled.converged) std::cerr << "warning: Platt fit did not converge\n";
            }
            if (!ca_out_params.empty()) {
                std::ofstream out(ca_out_params);
                out << params_json.dump(2) << "\n";
            } else {
                std::cout << params_json.dump(2) << "\n";
            }
            if (!ca_apply_to.empty()) {
                if (ca_per_generator)
                    throw std::runtime_error("--apply-to requires the pooled fit");
                if (ca_out_scores.empty())
                    throw std::runtime_error("--apply-to needs --out-scores");
                save_scores(platt_apply(pooled, load_scores(ca_apply_to)), ca_out_scores);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
