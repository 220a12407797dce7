#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bulbar/eval/friedman.hpp"
#include "bulbar/eval/metrics.hpp"
#include "bulbar/report/pipeline.hpp"

namespace bulbar::report {

/// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_field(std::string_view s);

/// Fixed 6-decimal formatting; empty for a missing value.
std::string format_value(std::optional<double> v);

std::string audio_features_csv(const std::vector<AudioRepetitionRow>& rows);
std::string video_features_csv(const std::vector<VideoRepetitionRow>& rows);

/// subject,rep,modality,reason
std::string exclusions_log(const std::vector<Exclusion>& exclusions);

/// Per-subject rows: subject, group, n_reps, rmse, then the chosen spec's fields.
std::string report_csv(const eval::EvaluationReport& report);

/// One row per (modality, model): n_subjects, mrmse, mrmse_als, mrmse_hc, cv_als, cv_hc.
std::string summary_csv(const std::vector<eval::EvaluationReport>& reports);

/// modality,model,subject,group,rep,y_true,y_pred
std::string predictions_csv(const std::vector<eval::EvaluationReport>& reports);

struct PredictionRecord {
    std::string modality;
    std::string model;
    std::string subject_id;
    Group group = Group::HC;
    int repetition = 0;
    double y_true = 0.0;
    double y_pred = 0.0;
};

/// Parses the output of predictions_csv. Throws ParseError.
std::vector<PredictionRecord> parse_predictions_csv(const std::string& text, const std::string& name);

/// Friedman input assembled from per-subject RMSEs of several conditions.
struct FriedmanInput {
    std::vector<std::string> conditions;  // "modality/model"
    std::vector<std::string> subjects;    // complete blocks only, sorted
    std::vector<std::vector<double>> blocks;
};

/// Blocks are the subjects present in every condition. Throws
/// ValidationError for fewer than two conditions or no common subject.
FriedmanInput friedman_input(const std::vector<PredictionRecord>& predictions);

/// chi2,df,p,n_blocks,conditions,subjects
std::string friedman_csv(const eval::FriedmanResult& result, const FriedmanInput& input);

}  // namespace bulbar::report
