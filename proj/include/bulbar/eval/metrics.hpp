#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bulbar/core/instances.hpp"
#include "bulbar/core/types.hpp"
#include "bulbar/models/model.hpp"
#include "bulbar/models/spec.hpp"
#include "bulbar/models/standardizer.hpp"

namespace bulbar::eval {

struct Prediction {
    int repetition = 0;
    double y_true = 0.0;
    double y_pred = 0.0;
};

struct FoldResult {
    std::string subject_id;
    Group group = Group::HC;
    models::ModelSpec chosen_spec;
    std::size_t chosen_index = 0;
    /// Inner-search score of the chosen spec.
    double inner_score = 0.0;
    /// Inner score of every grid spec, infinity for specs that failed.
    std::vector<double> inner_scores;
    /// Standardizer of the refit on the outer-train split.
    models::Standardizer standardizer;
    std::shared_ptr<const models::TrainedModel> model;
    std::vector<Prediction> predictions;
};

struct SubjectScore {
    std::string subject_id;
    Group group = Group::HC;
    std::size_t n_reps = 0;
    double rmse = 0.0;
};

struct EvaluationReport {
    Modality modality = Modality::Audio;
    models::ModelFamily family = models::ModelFamily::Svr;
    std::vector<SubjectScore> subjects;
    double mrmse = 0.0;
    std::optional<double> mrmse_als;
    std::optional<double> mrmse_hc;
    std::optional<double> cv_als;
    std::optional<double> cv_hc;
    std::vector<FoldResult> folds;
};

/// sqrt(mean((y_true - y_pred)^2)). Throws ValidationError when empty.
double subject_rmse(const std::vector<std::pair<double, double>>& pairs);
double subject_rmse(const std::vector<Prediction>& predictions);

/// Sample SD / mean; missing for fewer than two values or a zero mean.
std::optional<double> coefficient_of_variation(const std::vector<double>& values);

/// Unweighted mean over subjects; groups are taken from the folds.
EvaluationReport aggregate_metrics(std::vector<FoldResult> folds, Modality modality,
                                   models::ModelFamily family);

}  // namespace bulbar::eval
