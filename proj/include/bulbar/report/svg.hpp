#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar::report {

struct ScatterPoint {
    double y_true = 0.0;
    double y_pred = 0.0;
    Group group = Group::HC;
};

inline constexpr const char* kAlsColor = "#d62728";
inline constexpr const char* kHcColor = "#1f77b4";

/// Square predicted-vs-true plot: one <circle> per point (ALS red, HC
/// blue) and one identity <line class="identity">. Axes span the score
/// range 5-25, widened to whole numbers covering every point. Throws
/// ValidationError for an empty input.
std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title);

void write_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                       const std::filesystem::path& path);

}  // namespace bulbar::report
