#include "fpkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace fpkit {

namespace {

void check_scores(const std::vector<double>& v, const char* which) {
    if (v.empty()) throw std::invalid_argument(std::string(which) + " score list is empty");
    for (double s : v)
        if (!std::isfinite(s))
            throw std::invalid_argument(std::string(which) + " scores contain a non-finite value");
}

} // namespace

double roc_auc(const std::vector<double>& real_scores, const std::vector<double>& fake_scores) {
    check_scores(real_scores, "real");
    check_scores(fake_scores, "fake");
    // Midrank formulation: AUC = (R_fake - n_f(n_f+1)/2) / (n_f * n_r)
    // where R_fake is the sum of fake midranks in the pooled ordering.
    struct Item {
        double s;
        bool fake;
    };
    std::vector<Item> all;
    all.reserve(real_scores.size() + fake_scores.size());
    for (double s : real_scores) all.push_back({s, false});
    for (double s : fake_scores) all.push_back({s, true});
    std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.s < b.s; });
    const double n_f = static_cast<double>(fake_scores.size());
    const double n_r = static_cast<double>(real_scores.size());
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].s == all[i].s) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (all[k].fake) rank_sum += midrank;
        i = j;
    }
    return (rank_sum - n_f * (n_f + 1.0) / 2.0) / (n_f * n_r);
}

double accuracy_at_threshold(const std::vector<double>& real_scores,
                             const std::vector<double>& fake_scores, double threshold,
                             AccuracyMode mode) {
    check_scores(real_scores, "real");
    check_scores(fake_scores, "fake");
    std::size_t tp = 0, tn = 0;
    for (double s : fake_scores)
        if (s > threshold) ++tp;
    for (double s : real_scores)
        if (s <= threshold) ++tn;
    if (mode == AccuracyMode::balanced) {
        const double tpr = static_cast<double>(tp) / fake_scores.size();
        const double tnr = static_cast<double>(tn) / real_scores.size();
        return 0.5 * (tpr + tnr);
    }
    return static_cast<double>(tp + tn) / (fake_scores.size() + real_scores.size());
}

ScoreSet fuse_scores(const std::vector<ScoreSet>& score_sets) {
    if (score_sets.size() < 2)
        throw std::invalid_argument("fusion needs at least 2 score sets");
    const ScoreSet& first = score_sets[0];
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < first.records.size(); ++i)
        index[first.records[i].path] = i;

    std::vector<double> sums(first.records.size(), 0.0);
    for (const auto& r : first.records) sums[index[r.path]] = r.score;

    for (std::size_t s = 1; s < score_sets.size(); ++s) {
        const auto& set = score_sets[s];
        std::size_t matched = 0;
        for (const auto& r : set.records) {
            auto it = index.find(r.path);
            if (it == index.end()) continue;
            sums[it->second] += r.score;
            ++matched;
        }
        if (matched != first.records.size() || set.records.size() != first.records.size()) {
            std::set<std::string> a, b;
            for (const auto& r : first.records) a.insert(r.path);
            for (const auto& r : set.records) b.insert(r.path);
            std::vector<std::string> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                          std::back_inserter(diff));
            std::ostringstream msg;
            msg << "score sets cover different paths; symmetric difference:";
            for (const auto& p : diff) msg << ' ' << p;
            throw std::invalid_argument(msg.str());
        }
    }

    ScoreSet fused;
    for (std::size_t s = 0; s < score_sets.size(); ++s) {
        if (s) fused.detector_name += "+";
        fused.detector_name += score_sets[s].detector_name;
    }
    fused.records.reserve(first.records.size());
    const double inv = 1.0 / score_sets.size();
    for (std::size_t i = 0; i < first.records.size(); ++i)
        fused.records.push_back({first.records[i].path, sums[i] * inv});
    return fused;
}

double CalibrationParams::apply(double s) const {
    const double z = a * s + b;
    if (z >= 0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

CalibrationParams platt_fit(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("scores/labels size mismatch");
    check_scores(scores, "calibration");
    int n_pos = 0, n_neg = 0;
    for (const auto& l : labels) (l.cls == ImageClass::synthetic ? n_pos : n_neg)++;
    if (n_pos < 2 || n_neg < 2)
        throw std::invalid_argument("Platt fit needs at least 2 scores per class");

    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);
    std::vector<double> targets(scores.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        targets[i] = labels[i].cls == ImageClass::synthetic ? t_pos : t_neg;

    CalibrationParams p;
    p.a = 0.0;
    p.b = std::log((n_neg + 1.0) / (n_pos + 1.0));
    p.converged = false;
    constexpr int kMaxIter = 100;
    constexpr double kGradTol = 1e-10;
    constexpr double kDamping = 1e-12;
    for (int it = 0; it < kMaxIter; ++it) {
        double ga = 0.0, gb = 0.0, haa = kDamping, hab = 0.0, hbb = kDamping;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const double prob = p.apply(scores[i]);
            const double d = targets[i] - prob; // dNLL/dz with z = a*s + b
            ga += d * scores[i];
            gb += d;
            const double v = prob * (1.0 - prob);
            haa += v * scores[i] * scores[i];
            hab += v * scores[i];
            hbb += v;
        }
        if (std::sqrt(ga * ga + gb * gb) < kGradTol) {
            p.converged = true;
            break;
        }
        const double det = haa * hbb - hab * hab;
        p.a -= (hbb * ga - hab * gb) / det;
        p.b -= (haa * gb - hab * ga) / det;
    }
    return p;
}

ScoreSet platt_apply(const CalibrationParams& params, const ScoreSet& s) {
    ScoreSet out;
    out.detector_name = s.detector_name + "_calibrated";
    out.records.reserve(s.records.size());
    for (const auto& r : s.records)
        out.records.push_back({r.path, params.apply(r.score)});
    return out;
}

EvalReport build_report(const DatasetManifest& manifest, const ScoreSet& scores,
                        double threshold, AccuracyMode mode) {
    std::unordered_map<std::string, double> by_path;
    for (const auto& r : scores.records) by_path[r.path] = r.score;

    std::vector<double> real_scores;
    std::map<std::string, std::vector<double>> fake_by_gen; // sorted by name
    std::vector<std::string> missing;
    for (const auto& e : manifest.entries) {
        auto it = by_path.find(e.path);
        if (it == by_path.end()) {
            missing.push_back(e.path);
            continue;
        }
        if (e.label.cls == ImageClass::real)
            real_scores.push_back(it->second);
        else
            fake_by_gen[e.label.generator].push_back(it->second);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "manifest paths without scores:";
        for (const auto& p : missing) msg << ' ' << p;
        throw std::invalid_argument(msg.str());
    }
    if (real_scores.empty()) throw std::invalid_argument("manifest has no real images");
    if (fake_by_gen.empty()) throw std::invalid_argument("manifest has no synthetic images");

    EvalReport report;
    report.detector_name = scores.detector_name;
    for (const auto& [gen, fakes] : fake_by_gen) {
        GeneratorResult row;
        row.generator = gen;
        row.accuracy_pct = 100.0 * accuracy_at_threshold(real_scores, fakes, threshold, mode);
        row.auc_pct = 100.0 * roc_auc(real_scores, fakes);
        row.n_fake = static_cast<int>(fakes.size());
        row.n_real = static_cast<int>(real_scores.size());
        report.rows.push_back(std::move(row));
    }
    for (const auto& row : report.rows) {
        report.avg_accuracy_pct += row.accuracy_pct;
        report.avg_auc_pct += row.auc_pct;
    }
    report.avg_accuracy_pct /= report.rows.size();
    report.avg_auc_pct /= report.rows.size();
    return report;
}

std::string format_acc_auc(double acc_pct, double auc_pct) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f/%.1f", acc_pct, auc_pct);
    return buf;
}

std::string report_markdown(const EvalReport& r) {
    std::ostringstream out;
    out << "| generator | Acc./AUC% | n_fake | n_real |\n";
    out << "|---|---|---|---|\n";
    for (const auto& row : r.rows)
        out << "| " << row.generator << " | " << format_acc_auc(row.accuracy_pct, row.auc_pct)
            << " | " << row.n_fake << " | " << row.n_real << " |\n";
    out << "| AVG | " << format_acc_auc(r.avg_accuracy_pct, r.avg_auc_pct) << " | | |\n";
    return out.str();
}

std::string report_json(const EvalReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"generator", row.generator},
                        {"acc_pct", row.accuracy_pct},
                        {"auc_pct", row.auc_pct},
                        {"n_fake", row.n_fake},
                        {"n_real", row.n_real}});
    nlohmann::json j = {{"detector", r.detector_name},
                        {"rows", rows},
                        {"avg", {{"acc_pct", r.avg_accuracy_pct}, {"auc_pct", r.avg_auc_pct}}}};
    return j.dump(2);
}

} // namespace fpkit
