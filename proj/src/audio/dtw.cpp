#include "bulbar/audio/dtw.hpp"

#include <limits>
#include <vector>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    long length = 0;
};

bool better(const Cell& a, const Cell& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.length < b.length);
}

}  // namespace

double dtw_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() == 0 || b.rows() == 0) throw ValidationError("DTW of an empty sequence");
    if (a.cols() != b.cols()) {
        throw ValidationError(
            fmt::format("DTW dimension mismatch: {} vs {} columns", a.cols(), b.cols()));
    }
    const Eigen::Index n = a.rows(), m = b.rows();
    std::vector<Cell> prev(static_cast<std::size_t>(m)), cur(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double d = (a.row(i) - b.row(j)).norm();
            Cell best;
            if (i == 0 && j == 0) {
                best = {0.0, 0};
            } else {
                if (i > 0 && better(prev[j], best)) best = prev[j];
                if (j > 0 && better(cur[j - 1], best)) best = cur[j - 1];
                if (i > 0 && j > 0 && better(prev[j - 1], best)) best = prev[j - 1];
            }
            cur[j] = {best.cost + d, best.length + 1};
        }
        std::swap(prev, cur);
    }
    const Cell& end = prev[static_cast<std::size_t>(m - 1)];
    return end.cost / static_cast<double>(end.length);
}

}  // namespace bulbar::audio
