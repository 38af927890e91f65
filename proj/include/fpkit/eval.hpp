#pragma once

#include <string>
#include <vector>

#include "fpkit/manifest.hpp"

namespace fpkit {

// Mann-Whitney AUC: probability a fake score exceeds a real score, ties
// counting half. Rank-based O(n log n); matches the pairwise definition
// exactly.
double roc_auc(const std::vector<double>& real_scores, const std::vector<double>& fake_scores);

enum class AccuracyMode { balanced, raw };

// Fake is positive iff score > threshold; a score equal to the threshold
// is classified real.
double accuracy_at_threshold(const std::vector<double>& real_scores,
                             const std::vector<double>& fake_scores,
                             double threshold = 0.5,
                             AccuracyMode mode = AccuracyMode::balanced);

// Unweighted per-path average; inputs must cover exactly the same paths.
ScoreSet fuse_scores(const std::vector<ScoreSet>& score_sets);

// Calibrated probability p(s) = 1 / (1 + exp(a*s + b)); a < 0 preserves
// score ordering for higher-is-synthetic scores.
struct CalibrationParams {
    double a = 0.0;
    double b = 0.0;
    bool converged = true;

    double apply(double s) const;
};

// Platt scaling: Newton iterations on the log-likelihood with the
// prior-corrected targets t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2).
CalibrationParams platt_fit(const std::vector<double>& scores, const std::vector<Label>& labels);

ScoreSet platt_apply(const CalibrationParams& params, const ScoreSet& s);

struct GeneratorResult {
    std::string generator;
    double accuracy_pct = 0.0;
    double auc_pct = 0.0;
    int n_fake = 0;
    int n_real = 0;
};

struct EvalReport {
    std::string detector_name;
    std::vector<GeneratorResult> rows; // sorted by generator name
    double avg_accuracy_pct = 0.0;     // unweighted mean over rows
    double avg_auc_pct = 0.0;
};

// One row per generator, each against the full shared real set.
EvalReport build_report(const DatasetManifest& manifest, const ScoreSet& scores,
                        double threshold = 0.5, AccuracyMode mode = AccuracyMode::balanced);

// "99.9/100.0" style cell, one decimal place.
std::string format_acc_auc(double acc_pct, double auc_pct);

std::string report_markdown(const EvalReport& r);
std::string report_json(const EvalReport& r);

} // namespace fpkit
