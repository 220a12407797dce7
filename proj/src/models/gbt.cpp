#include "bulbar/models/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const std::vector<double>& grad, const std::vector<int>& features,
                int max_depth, const GbtTrainingConfig& config)
        : x_(x), grad_(grad), features_(features), max_depth_(max_depth), config_(config) {}

    RegressionTree build(std::vector<Eigen::Index> rows) {
        tree_.nodes.clear();
        grow(std::move(rows), 0);
        return std::move(tree_);
    }

private:
    double score(double g, double h) const { return g * g / (h + config_.lambda); }

    int grow(std::vector<Eigen::Index> rows, int depth) {
        double g = 0.0;
        for (auto r : rows) g += grad_[static_cast<std::size_t>(r)];
        const double h = static_cast<double>(rows.size());

        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back(TreeNode{});
        tree_.nodes[static_cast<std::size_t>(id)].value = -g / (h + config_.lambda);
        if (depth >= max_depth_) return id;

        const Split best = find_split(rows, g, h);
        if (best.feature < 0) return id;

        std::vector<Eigen::Index> left, right;
        for (auto r : rows) {
            (x_(r, best.feature) < best.threshold ? left : right).push_back(r);
        }
        const int l = grow(std::move(left), depth + 1);
        const int rr = grow(std::move(right), depth + 1);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = rr;
        return id;
    }

    Split find_split(const std::vector<Eigen::Index>& rows, double g_total, double h_total) const {
        Split best;
        best.gain = config_.min_split_gain;
        const double parent = score(g_total, h_total);
        const std::size_t n = rows.size();
        const auto min_leaf = static_cast<std::size_t>(std::max(1, config_.min_samples_leaf));
        std::vector<Eigen::Index> sorted(rows);
        for (int f : features_) {
            std::stable_sort(sorted.begin(), sorted.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return x_(a, f) < x_(b, f); });
            double gl = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                gl += grad_[static_cast<std::size_t>(sorted[k])];
                const double v = x_(sorted[k], f), next = x_(sorted[k + 1], f);
                if (!(v < next)) continue;
                const std::size_t nl = k + 1, nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double hl = static_cast<double>(nl);
                const double gain =
                    0.5 * (score(gl, hl) + score(g_total - gl, h_total - hl) - parent);
                if (gain > best.gain) {
                    double thr = 0.5 * (v + next);
                    if (!(thr > v && thr <= next)) thr = next;
                    best = Split{f, thr, gain};
                }
            }
        }
        return best;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<double>& grad_;
    const std::vector<int>& features_;
    int max_depth_;
    const GbtTrainingConfig& config_;
    RegressionTree tree_;
};

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

double RegressionTree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        i = static_cast<std::size_t>(x(nodes[i].feature) < nodes[i].threshold ? nodes[i].left : nodes[i].right);
    }
    return nodes[i].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return best;
}

Eigen::VectorXd GbtModel::predict(const Eigen::MatrixXd& x) const {
    if (x.rows() > 0 && x.cols() != input_dim) {
        throw ValidationError(fmt::format("GBT expects {} columns, got {}", input_dim, x.cols()));
    }
    Eigen::VectorXd out = Eigen::VectorXd::Constant(x.rows(), base_score);
    for (const auto& t : trees) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) += learning_rate * t.predict_row(x.row(r));
    }
    return out;
}

GbtModel train_gbt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbtSpec& spec,
                   std::uint64_t seed, const GbtTrainingConfig& config) {
    validate(ModelSpec{spec});
    const Eigen::Index n = x.rows();
    if (n < 2) throw ValidationError(fmt::format("GBT needs at least 2 rows, got {}", n));
    if (y.size() != n) throw ValidationError(fmt::format("GBT: {} rows but {} targets", n, y.size()));
    if (x.cols() < 1) throw ValidationError("GBT needs at least one feature");

    GbtModel model;
    model.base_score = y.mean();
    model.learning_rate = spec.learning_rate;
    model.input_dim = x.cols();

    Eigen::VectorXd pred = Eigen::VectorXd::Constant(n, model.base_score);
    model.training_loss.push_back(mse(pred, y));

    std::mt19937_64 rng(seed);
    const auto d = static_cast<int>(x.cols());
    const auto n_rows = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::lround(spec.subsample * static_cast<double>(n))));
    const int n_cols = std::max(1, static_cast<int>(std::lround(spec.colsample_bytree * d)));

    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(n));
    std::iota(all_rows.begin(), all_rows.end(), 0);
    std::vector<int> all_cols(static_cast<std::size_t>(d));
    std::iota(all_cols.begin(), all_cols.end(), 0);
    std::vector<double> grad(static_cast<std::size_t>(n));

    for (int round = 0; round < spec.n_estimators; ++round) {
        for (Eigen::Index i = 0; i < n; ++i) grad[static_cast<std::size_t>(i)] = pred(i) - y(i);

        std::vector<Eigen::Index> rows = all_rows;
        if (n_rows < n) {
            std::shuffle(rows.begin(), rows.end(), rng);
            rows.resize(static_cast<std::size_t>(n_rows));
            std::sort(rows.begin(), rows.end());
        }
        std::vector<int> cols = all_cols;
        if (n_cols < d) {
            std::shuffle(cols.begin(), cols.end(), rng);
            cols.resize(static_cast<std::size_t>(n_cols));
            std::sort(cols.begin(), cols.end());
        }

        TreeBuilder builder(x, grad, cols, spec.max_depth, config);
        RegressionTree tree = builder.build(std::move(rows));
        for (Eigen::Index i = 0; i < n; ++i) pred(i) += spec.learning_rate * tree.predict_row(x.row(i));
        model.trees.push_back(std::move(tree));
        model.training_loss.push_back(mse(pred, y));
    }
    return model;
}

}  // namespace bulbar::models
