#pragma once

#include <Eigen/Dense>

#include "bulbar/models/spec.hpp"

namespace bulbar::models {

struct SvrSolverConfig {
    double tolerance = 1e-3;
    /// Iteration cap is factor * n^2.
    double max_iter_factor = 10.0;
};

double kernel_value(Kernel kernel, double gamma, const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b);

/// 1 / (d * var(X)) over all entries of X; 1 when the variance is zero.
double scale_gamma(const Eigen::MatrixXd& x);

struct SvrModel {
    Kernel kernel = Kernel::Rbf;
    double gamma = 1.0;
    /// Training rows and their dual coefficients (alpha - alpha*), one per row.
    Eigen::MatrixXd vectors;
    Eigen::VectorXd coef;
    double rho = 0.0;
    bool converged = false;
    long iterations = 0;

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Epsilon-SVR dual solved by SMO with second-order working-set selection.
/// Throws ValidationError for fewer than two rows or mismatched sizes.
SvrModel train_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrSpec& spec,
                   const SvrSolverConfig& config = {});

}  // namespace bulbar::models
