#include "bulbar/eval/loso.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "bulbar/error.hpp"
#include "bulbar/eval/parallel.hpp"

namespace bulbar::eval {

namespace {

constexpr double kFailed = std::numeric_limits<double>::infinity();

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
    return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
    return out;
}

std::vector<Eigen::Index> rows_excluding(const Dataset& d, int a, int b) {
    std::vector<Eigen::Index> rows;
    for (std::size_t r = 0; r < d.subject_of_row.size(); ++r) {
        const int s = d.subject_of_row[r];
        if (s != a && s != b) rows.push_back(static_cast<Eigen::Index>(r));
    }
    return rows;
}

double rmse_of(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
    return std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
}

}  // namespace

std::vector<Eigen::Index> Dataset::rows_of(int subject) const {
    std::vector<Eigen::Index> rows;
    for (std::size_t r = 0; r < subject_of_row.size(); ++r) {
        if (subject_of_row[r] == subject) rows.push_back(static_cast<Eigen::Index>(r));
    }
    return rows;
}

Dataset make_dataset(const std::vector<Instance>& instances, Modality modality) {
    Dataset d;
    const auto cols = static_cast<Eigen::Index>(feature_count(modality));
    d.x.resize(static_cast<Eigen::Index>(instances.size()), cols);
    d.y.resize(static_cast<Eigen::Index>(instances.size()));
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        auto [it, inserted] = index.emplace(inst.subject_id, static_cast<int>(d.subject_ids.size()));
        if (inserted) {
            d.subject_ids.push_back(inst.subject_id);
            d.subject_groups.push_back(inst.group);
        }
        const auto f = inst.features(modality);
        for (Eigen::Index c = 0; c < cols; ++c) d.x(static_cast<Eigen::Index>(i), c) = f[static_cast<std::size_t>(c)];
        d.y(static_cast<Eigen::Index>(i)) = inst.target;
        d.subject_of_row.push_back(it->second);
        d.repetition.push_back(inst.repetition);
    }
    return d;
}

std::vector<FoldResult> nested_loso(const Dataset& data, const std::vector<models::ModelSpec>& grid,
                                    const LosoOptions& options) {
    const int n_subjects = static_cast<int>(data.subject_count());
    if (n_subjects < 3) {
        throw ValidationError(fmt::format("nested LOSO needs at least 3 subjects, got {}", n_subjects));
    }
    if (grid.empty()) throw ValidationError("hyperparameter grid is empty");
    for (int s = 0; s < n_subjects; ++s) {
        if (data.rows_of(s).empty()) {
            throw ValidationError(fmt::format("subject '{}' has no instances", data.subject_ids[static_cast<std::size_t>(s)]));
        }
    }

    const std::size_t n = static_cast<std::size_t>(n_subjects);
    const std::size_t g = grid.size();
    const std::size_t inner = n - 1;

    // Inner RMSE per (fold, spec, inner subject); inner subject k of fold o
    // is the k-th subject after removing o.
    std::vector<double> inner_rmse(n * g * inner, kFailed);
    parallel_for(n * g * inner, options.threads, [&](std::size_t task) {
        const std::size_t fold = task / (g * inner);
        const std::size_t spec = (task / inner) % g;
        const std::size_t k = task % inner;
        const int held = static_cast<int>(fold);
        const int val = static_cast<int>(k < fold ? k : k + 1);
        const auto train_rows = rows_excluding(data, held, val);
        const auto val_rows = data.rows_of(val);
        try {
            const auto model = models::train_model(take_rows(data.x, train_rows), take(data.y, train_rows),
                                                   grid[spec], task_seed(options.seed, fold, spec, k),
                                                   options.training);
            const Eigen::VectorXd pred = model.predict(take_rows(data.x, val_rows));
            const double r = rmse_of(take(data.y, val_rows), pred);
            inner_rmse[task] = std::isfinite(r) ? r : kFailed;
        } catch (const TrainingError&) {
            inner_rmse[task] = kFailed;
        }
    });

    std::vector<FoldResult> results(n);
    parallel_for(n, options.threads, [&](std::size_t fold) {
        FoldResult& res = results[fold];
        res.subject_id = data.subject_ids[fold];
        res.group = data.subject_groups[fold];
        res.inner_scores.assign(g, kFailed);
        for (std::size_t spec = 0; spec < g; ++spec) {
            double sum = 0.0;
            for (std::size_t k = 0; k < inner; ++k) sum += inner_rmse[(fold * g + spec) * inner + k];
            res.inner_scores[spec] = std::isfinite(sum) ? sum / static_cast<double>(inner) : kFailed;
        }

        std::vector<std::size_t> ranked(g);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            return res.inner_scores[a] < res.inner_scores[b];
        });

        const int held = static_cast<int>(fold);
        const auto train_rows = rows_excluding(data, held, held);
        const auto test_rows = data.rows_of(held);
        const Eigen::MatrixXd x_train = take_rows(data.x, train_rows);
        const Eigen::VectorXd y_train = take(data.y, train_rows);
        std::optional<models::TrainedModel> model;
        for (std::size_t spec : ranked) {
            if (!std::isfinite(res.inner_scores[spec])) break;
            try {
                model.emplace(models::train_model(x_train, y_train, grid[spec],
                                                  task_seed(options.seed, fold, spec, inner), options.training));
                res.chosen_index = spec;
                break;
            } catch (const TrainingError&) {
                continue;
            }
        }
        if (!model) {
            throw TrainingError(fmt::format("fold for subject '{}': every grid spec failed to train", res.subject_id));
        }
        res.chosen_spec = grid[res.chosen_index];
        res.inner_score = res.inner_scores[res.chosen_index];
        res.standardizer = model->standardizer();
        const Eigen::VectorXd pred = model->predict(take_rows(data.x, test_rows));
        res.model = std::make_shared<const models::TrainedModel>(std::move(*model));
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
            const Eigen::Index r = test_rows[i];
            res.predictions.push_back(
                Prediction{data.repetition[static_cast<std::size_t>(r)], data.y(r), pred(static_cast<Eigen::Index>(i))});
        }
    });
    return results;
}

std::vector<FoldResult> nested_loso(const std::vector<Instance>& instances, Modality modality,
                                    const std::vector<models::ModelSpec>& grid, const LosoOptions& options) {
    return nested_loso(make_dataset(instances, modality), grid, options);
}

}  // namespace bulbar::eval
