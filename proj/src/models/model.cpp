#include "bulbar/models/model.hpp"

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json vec_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

ordered_json mat_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vec_from(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd mat_from(const json& j, Eigen::Index cols_if_empty = 0) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix in model file");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

ordered_json state_json(const SvrModel& s) {
    ordered_json j;
    j["kernel"] = std::string(to_string(s.kernel));
    j["gamma"] = s.gamma;
    j["rho"] = s.rho;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["dual_coef"] = vec_json(s.coef);
    j["vectors"] = mat_json(s.vectors);
    return j;
}

ordered_json state_json(const MlpModel& m) {
    ordered_json j;
    j["activation"] = std::string(to_string(m.activation));
    ordered_json layers = ordered_json::array();
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        ordered_json layer;
        layer["weights"] = mat_json(m.weights[l]);
        layer["biases"] = vec_json(m.biases[l]);
        layers.push_back(std::move(layer));
    }
    j["layers"] = std::move(layers);
    return j;
}

ordered_json state_json(const GbtModel& g) {
    ordered_json j;
    j["base_score"] = g.base_score;
    j["learning_rate"] = g.learning_rate;
    j["input_dim"] = g.input_dim;
    ordered_json trees = ordered_json::array();
    for (const auto& t : g.trees) {
        ordered_json nodes = ordered_json::array();
        for (const auto& n : t.nodes) {
            nodes.push_back(ordered_json::array({n.feature, n.threshold, n.left, n.right, n.value}));
        }
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j;
}

}  // namespace

TrainedModel::TrainedModel(ModelSpec spec, Standardizer standardizer, State state, PredictionClamp clamp)
    : spec_(std::move(spec)),
      standardizer_(std::move(standardizer)),
      state_(std::move(state)),
      clamp_(clamp) {}

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& x) const {
    if (x.rows() == 0) return Eigen::VectorXd(0);
    const Eigen::MatrixXd z = standardizer_.apply(x);
    Eigen::VectorXd out = std::visit([&](const auto& m) -> Eigen::VectorXd { return m.predict(z); }, state_);
    if (clamp_.enabled) out = out.cwiseMax(clamp_.low).cwiseMin(clamp_.high);
    return out;
}

nlohmann::ordered_json TrainedModel::to_json() const {
    ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["spec"] = models::to_json(spec_);
    j["standardizer"] = {{"mean", vec_json(standardizer_.mean)}, {"sd", vec_json(standardizer_.sd)}};
    j["clamp"] = {{"enabled", clamp_.enabled}, {"low", clamp_.low}, {"high", clamp_.high}};
    j["state"] = std::visit([](const auto& m) { return state_json(m); }, state_);
    return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw UnsupportedFormatError(fmt::format("model format version {} not supported", version));
        }
        ModelSpec spec = spec_from_json(j.at("spec"));
        Standardizer st{vec_from(j.at("standardizer").at("mean")), vec_from(j.at("standardizer").at("sd"))};
        PredictionClamp clamp{j.at("clamp").at("enabled").get<bool>(), j.at("clamp").at("low").get<double>(),
                              j.at("clamp").at("high").get<double>()};
        const json& s = j.at("state");
        State state;
        switch (family_of(spec)) {
            case ModelFamily::Svr: {
                SvrModel m;
                m.kernel = parse_kernel(s.at("kernel").get<std::string>());
                m.gamma = s.at("gamma").get<double>();
                m.rho = s.at("rho").get<double>();
                m.converged = s.at("converged").get<bool>();
                m.iterations = s.at("iterations").get<long>();
                m.coef = vec_from(s.at("dual_coef"));
                m.vectors = mat_from(s.at("vectors"), st.dimension());
                state = std::move(m);
                break;
            }
            case ModelFamily::Mlp: {
                MlpModel m;
                m.activation = parse_activation(s.at("activation").get<std::string>());
                for (const auto& layer : s.at("layers")) {
                    m.weights.push_back(mat_from(layer.at("weights")));
                    m.biases.push_back(vec_from(layer.at("biases")));
                }
                state = std::move(m);
                break;
            }
            case ModelFamily::Gbt: {
                GbtModel m;
                m.base_score = s.at("base_score").get<double>();
                m.learning_rate = s.at("learning_rate").get<double>();
                m.input_dim = s.at("input_dim").get<Eigen::Index>();
                for (const auto& nodes : s.at("trees")) {
                    RegressionTree t;
                    for (const auto& n : nodes) {
                        t.nodes.push_back(TreeNode{n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                                                   n.at(3).get<int>(), n.at(4).get<double>()});
                    }
                    m.trees.push_back(std::move(t));
                }
                state = std::move(m);
                break;
            }
        }
        return TrainedModel(std::move(spec), std::move(st), std::move(state), clamp);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("model file: {}", e.what()));
    }
}

TrainedModel train_model(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ModelSpec& spec,
                         std::uint64_t seed, const TrainingConfig& config) {
    if (x.rows() < 2) throw ValidationError(fmt::format("training needs at least 2 rows, got {}", x.rows()));
    if (y.size() != x.rows()) {
        throw ValidationError(fmt::format("{} rows but {} targets", x.rows(), y.size()));
    }
    Standardizer st = Standardizer::fit(x);
    const Eigen::MatrixXd z = st.apply(x);
    TrainedModel::State state;
    if (const auto* s = std::get_if<SvrSpec>(&spec)) {
        state = train_svr(z, y, *s, config.svr);
    } else if (const auto* m = std::get_if<MlpSpec>(&spec)) {
        state = train_mlp(z, y, *m, seed, config.mlp);
    } else {
        state = train_gbt(z, y, std::get<GbtSpec>(spec), seed, config.gbt);
    }
    return TrainedModel(spec, std::move(st), std::move(state), config.clamp);
}

}  // namespace bulbar::models
