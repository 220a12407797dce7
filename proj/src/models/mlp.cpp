#include "bulbar/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

namespace {

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
    switch (a) {
        case Activation::Identity: return z;
        case Activation::Logistic: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
        case Activation::Tanh: return z.array().tanh().matrix();
        case Activation::Relu: return z.array().max(0.0).matrix();
    }
    return z;
}

// Derivative expressed through the pre-activation z and activation h.
Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z, const Eigen::MatrixXd& h) {
    switch (a) {
        case Activation::Identity: return Eigen::MatrixXd::Ones(z.rows(), z.cols());
        case Activation::Logistic: return (h.array() * (1.0 - h.array())).matrix();
        case Activation::Tanh: return (1.0 - h.array().square()).matrix();
        case Activation::Relu: return (z.array() > 0.0).cast<double>().matrix();
    }
    return z;
}

struct ForwardPass {
    std::vector<Eigen::MatrixXd> pre;   // z per layer, columns are samples
    std::vector<Eigen::MatrixXd> post;  // h per layer; post[0] is the input
};

ForwardPass forward(const MlpModel& m, const Eigen::MatrixXd& x_rows) {
    ForwardPass fp;
    fp.post.push_back(x_rows.transpose());
    const std::size_t layers = m.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd z = m.weights[l] * fp.post.back();
        z.colwise() += m.biases[l];
        const bool output = l + 1 == layers;
        fp.post.push_back(output ? z : activate(m.activation, z));
        fp.pre.push_back(std::move(z));
    }
    return fp;
}

void check_inputs(const MlpModel& m, const Eigen::MatrixXd& x) {
    if (!m.weights.empty() && x.cols() != m.weights.front().cols()) {
        throw ValidationError(
            fmt::format("MLP expects {} columns, got {}", m.weights.front().cols(), x.cols()));
    }
}

}  // namespace

Eigen::VectorXd MlpModel::predict(const Eigen::MatrixXd& x) const {
    if (x.rows() == 0) return Eigen::VectorXd(0);
    check_inputs(*this, x);
    const ForwardPass fp = forward(*this, x);
    return fp.post.back().row(0).transpose();
}

MlpModel init_mlp(Eigen::Index input_dim, const std::vector<int>& hidden, Activation activation,
                  std::uint64_t seed) {
    MlpModel m;
    m.activation = activation;
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> sizes{input_dim};
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(1);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const Eigen::Index fan_in = sizes[l], fan_out = sizes[l + 1];
        const double bound = std::sqrt(3.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            for (Eigen::Index c = 0; c < fan_in; ++c) w(r, c) = dist(rng);
        }
        m.weights.push_back(std::move(w));
        m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return m;
}

MlpGradient mlp_loss_gradient(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    check_inputs(model, x);
    const ForwardPass fp = forward(model, x);
    const double b = static_cast<double>(x.rows());
    const Eigen::RowVectorXd residual = fp.post.back().row(0) - y.transpose();

    MlpGradient g;
    g.loss = 0.5 * residual.squaredNorm() / b;
    const std::size_t layers = model.weights.size();
    g.d_weights.resize(layers);
    g.d_biases.resize(layers);

    Eigen::MatrixXd delta = residual / b;
    for (std::size_t l = layers; l-- > 0;) {
        g.d_weights[l] = delta * fp.post[l].transpose();
        g.d_biases[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = model.weights[l].transpose() * delta;
            delta = back.cwiseProduct(activation_derivative(model.activation, fp.pre[l - 1], fp.post[l]));
        }
    }
    return g;
}

MlpModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpSpec& spec,
                   std::uint64_t seed, const MlpTrainingConfig& config) {
    validate(ModelSpec{spec});
    const Eigen::Index n = x.rows();
    if (n < 2) throw ValidationError(fmt::format("MLP needs at least 2 rows, got {}", n));
    if (y.size() != n) throw ValidationError(fmt::format("MLP: {} rows but {} targets", n, y.size()));
    if (config.batch_size < 1 || config.epochs < 0) throw ValidationError("MLP: invalid training config");

    MlpModel m = init_mlp(x.cols(), spec.layer_sizes, spec.activation, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

    const std::size_t layers = m.weights.size();
    std::vector<Eigen::MatrixXd> mw(layers), vw(layers);
    std::vector<Eigen::VectorXd> mb(layers), vb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        mw[l] = vw[l] = Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols());
        mb[l] = vb[l] = Eigen::VectorXd::Zero(m.biases[l].size());
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, n);
    long step = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    int stale_epochs = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index len = std::min(batch, n - start);
            Eigen::MatrixXd xb(len, x.cols());
            Eigen::VectorXd yb(len);
            for (Eigen::Index r = 0; r < len; ++r) {
                const Eigen::Index src = order[static_cast<std::size_t>(start + r)];
                xb.row(r) = x.row(src);
                yb(r) = y(src);
            }
            const MlpGradient g = mlp_loss_gradient(m, xb, yb);
            if (!std::isfinite(g.loss)) {
                throw TrainingError(fmt::format("MLP diverged at epoch {} (lr {})", epoch, spec.learning_rate));
            }
            epoch_loss += g.loss * static_cast<double>(len);
            ++step;
            const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            const double lr = spec.learning_rate;
            for (std::size_t l = 0; l < layers; ++l) {
                mw[l] = config.beta1 * mw[l] + (1.0 - config.beta1) * g.d_weights[l];
                vw[l] = config.beta2 * vw[l] + (1.0 - config.beta2) * g.d_weights[l].cwiseAbs2();
                m.weights[l].array() -=
                    lr * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + config.adam_epsilon);
                mb[l] = config.beta1 * mb[l] + (1.0 - config.beta1) * g.d_biases[l];
                vb[l] = config.beta2 * vb[l] + (1.0 - config.beta2) * g.d_biases[l].cwiseAbs2();
                m.biases[l].array() -=
                    lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + config.adam_epsilon);
            }
        }
        epoch_loss /= static_cast<double>(n);
        if (epoch_loss > best_loss - config.tol) {
            if (++stale_epochs >= config.n_iter_no_change) break;
        } else {
            stale_epochs = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }
    const Eigen::VectorXd fitted = m.predict(x);
    if (!fitted.allFinite()) throw TrainingError("MLP produced non-finite predictions");
    return m;
}

}  // namespace bulbar::models
