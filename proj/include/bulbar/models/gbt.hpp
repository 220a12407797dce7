#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bulbar/models/spec.hpp"

namespace bulbar::models {

struct GbtTrainingConfig {
    double lambda = 1.0;
    /// Minimum gain required to split.
    double min_split_gain = 0.0;
    int min_samples_leaf = 1;
};

struct TreeNode {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

/// Rows with x[feature] < threshold go left.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    int depth() const;
};

struct GbtModel {
    double base_score = 0.0;
    double learning_rate = 1.0;
    Eigen::Index input_dim = 0;
    std::vector<RegressionTree> trees;
    /// Training MSE after 0, 1, ..., n rounds (full training set).
    std::vector<double> training_loss;

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

GbtModel train_gbt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbtSpec& spec,
                   std::uint64_t seed, const GbtTrainingConfig& config = {});

}  // namespace bulbar::models
