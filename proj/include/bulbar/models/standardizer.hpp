#pragma once

#include <Eigen/Dense>

namespace bulbar::models {

/// Per-column mean and sample SD of a training matrix. Columns whose SD is
/// zero (up to rounding) get SD 1 so they map to 0.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;

    /// Throws ValidationError for an empty matrix.
    static Standardizer fit(const Eigen::MatrixXd& x);

    /// Throws ValidationError on a column-count mismatch.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

    Eigen::Index dimension() const { return mean.size(); }

    friend bool operator==(const Standardizer& a, const Standardizer& b) {
        return a.mean == b.mean && a.sd == b.sd;
    }
};

}  // namespace bulbar::models
