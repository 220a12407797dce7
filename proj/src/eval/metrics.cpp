#include "bulbar/eval/metrics.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::eval {

namespace {

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double subject_rmse(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.empty()) throw ValidationError("RMSE of an empty prediction set");
    double ss = 0.0;
    for (const auto& [t, p] : pairs) ss += (t - p) * (t - p);
    return std::sqrt(ss / static_cast<double>(pairs.size()));
}

double subject_rmse(const std::vector<Prediction>& predictions) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(predictions.size());
    for (const auto& p : predictions) pairs.emplace_back(p.y_true, p.y_pred);
    return subject_rmse(pairs);
}

std::optional<double> coefficient_of_variation(const std::vector<double>& values) {
    if (values.size() < 2) return std::nullopt;
    const double mean = *mean_of(values);
    if (mean == 0.0) return std::nullopt;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1)) / mean;
}

EvaluationReport aggregate_metrics(std::vector<FoldResult> folds, Modality modality,
                                   models::ModelFamily family) {
    if (folds.empty()) throw ValidationError("no folds to aggregate");
    EvaluationReport report;
    report.modality = modality;
    report.family = family;
    std::vector<double> all, als, hc;
    for (const auto& f : folds) {
        SubjectScore s{f.subject_id, f.group, f.predictions.size(), subject_rmse(f.predictions)};
        all.push_back(s.rmse);
        (s.group == Group::ALS ? als : hc).push_back(s.rmse);
        report.subjects.push_back(std::move(s));
    }
    report.mrmse = *mean_of(all);
    report.mrmse_als = mean_of(als);
    report.mrmse_hc = mean_of(hc);
    report.cv_als = coefficient_of_variation(als);
    report.cv_hc = coefficient_of_variation(hc);
    report.folds = std::move(folds);
    return report;
}

}  // namespace bulbar::eval
