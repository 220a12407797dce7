#include "bulbar/models/standardizer.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    if (x.rows() == 0 || x.cols() == 0) throw ValidationError("cannot standardize an empty matrix");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.sd.resize(x.cols());
    const double denom = x.rows() > 1 ? static_cast<double>(x.rows() - 1) : 1.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean(c)).square().sum() / denom;
        const double sd = std::sqrt(var);
        s.sd(c) = sd > 1e-12 * std::max(1.0, std::abs(s.mean(c))) ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size()) {
        throw ValidationError(
            fmt::format("standardizer fitted on {} columns, got {}", mean.size(), x.cols()));
    }
    Eigen::MatrixXd out = x;
    out.rowwise() -= mean.transpose();
    out.array().rowwise() /= sd.transpose().array();
    return out;
}

}  // namespace bulbar::models
