#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Dense>

#include "bulbar/models/gbt.hpp"
#include "bulbar/models/mlp.hpp"
#include "bulbar/models/spec.hpp"
#include "bulbar/models/standardizer.hpp"
#include "bulbar/models/svr.hpp"
#include "json.hpp"

namespace bulbar::models {

struct PredictionClamp {
    bool enabled = false;
    double low = 5.0;
    double high = 25.0;
};

struct TrainingConfig {
    SvrSolverConfig svr;
    MlpTrainingConfig mlp;
    GbtTrainingConfig gbt;
    PredictionClamp clamp;
};

inline constexpr int kModelFormatVersion = 1;

/// Fitted regressor together with the spec and the standardizer fitted on
/// its training rows. Immutable after training.
class TrainedModel {
public:
    using State = std::variant<SvrModel, MlpModel, GbtModel>;

    TrainedModel(ModelSpec spec, Standardizer standardizer, State state, PredictionClamp clamp);

    /// Raw feature rows in, one prediction per row out. Throws
    /// ValidationError when the column count differs from training.
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

    const ModelSpec& spec() const { return spec_; }
    const Standardizer& standardizer() const { return standardizer_; }
    const State& state() const { return state_; }

    nlohmann::ordered_json to_json() const;
    static TrainedModel from_json(const nlohmann::json& j);

private:
    ModelSpec spec_;
    Standardizer standardizer_;
    State state_;
    PredictionClamp clamp_;
};

/// Standardizes x, then trains the family selected by spec.
TrainedModel train_model(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ModelSpec& spec,
                         std::uint64_t seed, const TrainingConfig& config = {});

}  // namespace bulbar::models
