#include "bulbar/models/spec.hpp"

#include <array>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

namespace {

constexpr std::array kSvrC = {0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0};
constexpr std::array kSvrEpsilon = {0.01, 0.1, 0.5, 1.0};
constexpr std::array kSvrKernels = {Kernel::Linear, Kernel::Rbf, Kernel::Sigmoid};

const std::vector<std::vector<int>> kMlpLayers = {
    {10, 50},       {10, 30, 100},  {10, 50, 100},  {10, 50, 200},
    {10, 100, 100}, {10, 100, 200}, {50, 10},       {100, 30, 10},
    {100, 50, 10},  {200, 50, 10},  {100, 100, 10}, {200, 100, 10},
};
constexpr std::array kMlpLearningRates = {0.0001, 0.001, 0.01};
constexpr std::array kMlpActivations = {Activation::Identity, Activation::Logistic,
                                        Activation::Tanh, Activation::Relu};

constexpr std::array kGbtEstimators = {2, 3, 4, 5};
constexpr std::array kGbtDepths = {3, 4, 5, 6, 8};
// Not sorted: grid order follows this list.
constexpr std::array kGbtLearningRates = {0.001, 0.05, 0.01, 0.1, 0.15, 0.3};
constexpr std::array kGbtFractions = {0.1, 0.3, 0.5, 0.7, 1.0};

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

std::string_view to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::Svr: return "svr";
        case ModelFamily::Mlp: return "mlp";
        case ModelFamily::Gbt: return "gbt";
    }
    return "?";
}

std::string_view to_string(Kernel k) {
    switch (k) {
        case Kernel::Linear: return "linear";
        case Kernel::Rbf: return "rbf";
        case Kernel::Sigmoid: return "sigmoid";
    }
    return "?";
}

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Logistic: return "logistic";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
    }
    return "?";
}

ModelFamily parse_family(std::string_view s) {
    if (s == "svr") return ModelFamily::Svr;
    if (s == "mlp") return ModelFamily::Mlp;
    if (s == "gbt") return ModelFamily::Gbt;
    throw ValidationError(fmt::format("unknown model family '{}'", s));
}

Kernel parse_kernel(std::string_view s) {
    if (s == "linear") return Kernel::Linear;
    if (s == "rbf") return Kernel::Rbf;
    if (s == "sigmoid") return Kernel::Sigmoid;
    throw ValidationError(fmt::format("unknown kernel '{}'", s));
}

Activation parse_activation(std::string_view s) {
    if (s == "identity") return Activation::Identity;
    if (s == "logistic") return Activation::Logistic;
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    throw ValidationError(fmt::format("unknown activation '{}'", s));
}

ModelFamily family_of(const ModelSpec& spec) {
    return static_cast<ModelFamily>(spec.index());
}

void validate(const ModelSpec& spec) {
    if (const auto* s = std::get_if<SvrSpec>(&spec)) {
        if (!(s->c > 0.0)) throw ValidationError(fmt::format("SVR C must be > 0, got {}", s->c));
        if (!(s->epsilon >= 0.0)) {
            throw ValidationError(fmt::format("SVR epsilon must be >= 0, got {}", s->epsilon));
        }
    } else if (const auto* m = std::get_if<MlpSpec>(&spec)) {
        if (m->layer_sizes.empty()) throw ValidationError("MLP layer_sizes must not be empty");
        for (int n : m->layer_sizes) {
            if (n <= 0) throw ValidationError(fmt::format("MLP layer size must be positive, got {}", n));
        }
        if (!(m->learning_rate > 0.0)) {
            throw ValidationError(fmt::format("MLP learning rate must be > 0, got {}", m->learning_rate));
        }
    } else {
        const auto& g = std::get<GbtSpec>(spec);
        if (g.n_estimators < 0) throw ValidationError("GBT n_estimators must be >= 0");
        if (g.max_depth < 1) throw ValidationError("GBT max_depth must be >= 1");
        if (!(g.learning_rate > 0.0)) throw ValidationError("GBT learning_rate must be > 0");
        if (!(g.subsample > 0.0 && g.subsample <= 1.0)) {
            throw ValidationError(fmt::format("GBT subsample must be in (0, 1], got {}", g.subsample));
        }
        if (!(g.colsample_bytree > 0.0 && g.colsample_bytree <= 1.0)) {
            throw ValidationError(
                fmt::format("GBT colsample_bytree must be in (0, 1], got {}", g.colsample_bytree));
        }
    }
}

std::vector<std::pair<std::string, std::string>> spec_fields(const ModelSpec& spec) {
    if (const auto* s = std::get_if<SvrSpec>(&spec)) {
        return {{"C", num(s->c)}, {"epsilon", num(s->epsilon)}, {"kernel", std::string(to_string(s->kernel))}};
    }
    if (const auto* m = std::get_if<MlpSpec>(&spec)) {
        return {{"layer_sizes", fmt::format("{}", fmt::join(m->layer_sizes, "-"))},
                {"learning_rate", num(m->learning_rate)},
                {"activation", std::string(to_string(m->activation))}};
    }
    const auto& g = std::get<GbtSpec>(spec);
    return {{"n_estimators", std::to_string(g.n_estimators)},
            {"max_depth", std::to_string(g.max_depth)},
            {"learning_rate", num(g.learning_rate)},
            {"subsample", num(g.subsample)},
            {"colsample_bytree", num(g.colsample_bytree)}};
}

std::string describe(const ModelSpec& spec) {
    std::string out(to_string(family_of(spec)));
    for (const auto& [k, v] : spec_fields(spec)) out += fmt::format(" {}={}", k, v);
    return out;
}

nlohmann::ordered_json to_json(const ModelSpec& spec) {
    nlohmann::ordered_json j;
    j["family"] = std::string(to_string(family_of(spec)));
    if (const auto* s = std::get_if<SvrSpec>(&spec)) {
        j["C"] = s->c;
        j["epsilon"] = s->epsilon;
        j["kernel"] = std::string(to_string(s->kernel));
    } else if (const auto* m = std::get_if<MlpSpec>(&spec)) {
        j["layer_sizes"] = m->layer_sizes;
        j["learning_rate"] = m->learning_rate;
        j["activation"] = std::string(to_string(m->activation));
    } else {
        const auto& g = std::get<GbtSpec>(spec);
        j["n_estimators"] = g.n_estimators;
        j["max_depth"] = g.max_depth;
        j["learning_rate"] = g.learning_rate;
        j["subsample"] = g.subsample;
        j["colsample_bytree"] = g.colsample_bytree;
    }
    return j;
}

ModelSpec spec_from_json(const nlohmann::json& j) {
    try {
        const ModelFamily family = parse_family(j.at("family").get<std::string>());
        ModelSpec spec;
        switch (family) {
            case ModelFamily::Svr:
                spec = SvrSpec{j.at("C").get<double>(), j.at("epsilon").get<double>(),
                               parse_kernel(j.at("kernel").get<std::string>())};
                break;
            case ModelFamily::Mlp:
                spec = MlpSpec{j.at("layer_sizes").get<std::vector<int>>(),
                               j.at("learning_rate").get<double>(),
                               parse_activation(j.at("activation").get<std::string>())};
                break;
            case ModelFamily::Gbt:
                spec = GbtSpec{j.at("n_estimators").get<int>(), j.at("max_depth").get<int>(),
                               j.at("learning_rate").get<double>(), j.at("subsample").get<double>(),
                               j.at("colsample_bytree").get<double>()};
                break;
        }
        validate(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("model spec: {}", e.what()));
    }
}

std::vector<ModelSpec> enumerate_grid(ModelFamily family) {
    std::vector<ModelSpec> grid;
    switch (family) {
        case ModelFamily::Svr:
            for (double c : kSvrC)
                for (double e : kSvrEpsilon)
                    for (Kernel k : kSvrKernels) grid.emplace_back(SvrSpec{c, e, k});
            break;
        case ModelFamily::Mlp:
            for (const auto& layers : kMlpLayers)
                for (double lr : kMlpLearningRates)
                    for (Activation a : kMlpActivations) grid.emplace_back(MlpSpec{layers, lr, a});
            break;
        case ModelFamily::Gbt:
            for (int n : kGbtEstimators)
                for (int d : kGbtDepths)
                    for (double lr : kGbtLearningRates)
                        for (double ss : kGbtFractions)
                            for (double cs : kGbtFractions) grid.emplace_back(GbtSpec{n, d, lr, ss, cs});
            break;
    }
    return grid;
}

std::vector<ModelSpec> smoke_grid(ModelFamily family) {
    std::vector<ModelSpec> grid;
    switch (family) {
        case ModelFamily::Svr:
            for (double c : {10.0, 100.0})
                for (double e : {0.1, 0.5})
                    for (Kernel k : {Kernel::Linear, Kernel::Rbf}) grid.emplace_back(SvrSpec{c, e, k});
            break;
        case ModelFamily::Mlp:
            for (const std::vector<int>& layers : {std::vector<int>{10, 50}, std::vector<int>{50, 10}})
                for (double lr : {0.001, 0.01})
                    for (Activation a : {Activation::Tanh, Activation::Relu})
                        grid.emplace_back(MlpSpec{layers, lr, a});
            break;
        case ModelFamily::Gbt:
            for (int n : {4, 5})
                for (double ss : {0.7, 1.0})
                    for (double cs : {0.7, 1.0}) grid.emplace_back(GbtSpec{n, 3, 0.3, ss, cs});
            break;
    }
    return grid;
}

}  // namespace bulbar::models
