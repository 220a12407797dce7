#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bulbar/models/spec.hpp"

namespace bulbar::models {

struct MlpTrainingConfig {
    int batch_size = 32;
    /// Upper bound on epochs.
    int epochs = 200;
    /// Training stops once the epoch loss has failed to improve on the
    /// best loss by at least tol for n_iter_no_change epochs in a row.
    double tol = 1e-4;
    int n_iter_no_change = 10;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
};

/// Fully connected network. weights[l] is (fan_out x fan_in); the last
/// layer has a single linear output unit.
struct MlpModel {
    Activation activation = Activation::Relu;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Uniform(-sqrt(3/fan_in), sqrt(3/fan_in)) weights, zero biases.
MlpModel init_mlp(Eigen::Index input_dim, const std::vector<int>& hidden, Activation activation,
                  std::uint64_t seed);

struct MlpGradient {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> d_weights;
    std::vector<Eigen::VectorXd> d_biases;
};

/// Loss 0.5 * mean squared error over the rows of x, with its gradient.
MlpGradient mlp_loss_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y);

/// Adam on shuffled mini-batches. Throws TrainingError if the loss
/// becomes non-finite.
MlpModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpSpec& spec,
                   std::uint64_t seed, const MlpTrainingConfig& config = {});

}  // namespace bulbar::models
