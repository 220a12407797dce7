#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace bulbar::models {

enum class ModelFamily { Svr, Mlp, Gbt };
enum class Kernel { Linear, Rbf, Sigmoid };
enum class Activation { Identity, Logistic, Tanh, Relu };

struct SvrSpec {
    double c = 1.0;
    double epsilon = 0.1;
    Kernel kernel = Kernel::Rbf;
    friend bool operator==(const SvrSpec&, const SvrSpec&) = default;
};

struct MlpSpec {
    std::vector<int> layer_sizes{100};
    double learning_rate = 0.001;
    Activation activation = Activation::Relu;
    friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct GbtSpec {
    int n_estimators = 5;
    int max_depth = 6;
    double learning_rate = 0.3;
    double subsample = 1.0;
    double colsample_bytree = 1.0;
    friend bool operator==(const GbtSpec&, const GbtSpec&) = default;
};

using ModelSpec = std::variant<SvrSpec, MlpSpec, GbtSpec>;

std::string_view to_string(ModelFamily f);
std::string_view to_string(Kernel k);
std::string_view to_string(Activation a);
ModelFamily parse_family(std::string_view s);
Kernel parse_kernel(std::string_view s);
Activation parse_activation(std::string_view s);

ModelFamily family_of(const ModelSpec& spec);

/// Throws ValidationError when a hyperparameter is out of range.
void validate(const ModelSpec& spec);

/// (name, value) pairs in a stable order, values formatted for CSV output.
std::vector<std::pair<std::string, std::string>> spec_fields(const ModelSpec& spec);
std::string describe(const ModelSpec& spec);

nlohmann::ordered_json to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const nlohmann::json& j);

/// Full Cartesian product of the hyperparameter lists, in the
/// order the lists are written (first list varies slowest).
std::vector<ModelSpec> enumerate_grid(ModelFamily family);

/// Eight-spec subsets for quick end-to-end runs.
std::vector<ModelSpec> smoke_grid(ModelFamily family);

}  // namespace bulbar::models
