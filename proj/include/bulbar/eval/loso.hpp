#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bulbar/core/instances.hpp"
#include "bulbar/eval/metrics.hpp"
#include "bulbar/models/model.hpp"

namespace bulbar::eval {

/// Instances flattened into a design matrix with subject bookkeeping.
/// Subjects are numbered in order of first appearance.
struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<int> subject_of_row;
    std::vector<int> repetition;
    std::vector<std::string> subject_ids;
    std::vector<Group> subject_groups;

    std::size_t subject_count() const { return subject_ids.size(); }
    std::vector<Eigen::Index> rows_of(int subject) const;
};

Dataset make_dataset(const std::vector<Instance>& instances, Modality modality);

struct LosoOptions {
    std::uint64_t seed = 0;
    /// 0 selects the hardware concurrency.
    unsigned threads = 0;
    models::TrainingConfig training;
};

/// Nested leave-one-subject-out: one fold per subject, inner LOSO over the
/// remaining subjects for every grid spec. Inner score is the mean of
/// inner per-subject RMSEs; ties go to the earliest grid index. Results
/// do not depend on the thread count.
///
/// Throws ValidationError for fewer than 3 subjects or an empty grid, and
/// TrainingError when every spec fails in a fold.
std::vector<FoldResult> nested_loso(const Dataset& data, const std::vector<models::ModelSpec>& grid,
                                    const LosoOptions& options = {});

std::vector<FoldResult> nested_loso(const std::vector<Instance>& instances, Modality modality,
                                    const std::vector<models::ModelSpec>& grid,
                                    const LosoOptions& options = {});

}  // namespace bulbar::eval
