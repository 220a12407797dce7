#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bulbar/video/normalize.hpp"

namespace bulbar::video {

/// Sum of frame-to-frame displacements of one landmark (3D). Throws
/// MissingFeatureError for fewer than two frames.
double cumulative_path(const NormalizedTrack& track, std::size_t landmark_index);

struct DerivativeStats {
    double max = 0.0;
    double min = 0.0;
    double rms = 0.0;
};

/// Forward finite difference of the given order scaled by
/// frame_rate^order. Needs order + 1 samples (MissingFeatureError
/// otherwise).
DerivativeStats derivative_stats(std::span<const double> signal, double frame_rate, int order);

/// Per-frame coordinate of one landmark (axis 0 = x, 1 = y, 2 = z).
std::vector<double> coordinate_series(const NormalizedTrack& track, std::size_t landmark_index,
                                      std::size_t axis);

/// Per-interval displacement magnitudes of one landmark.
std::vector<double> speed_series(const NormalizedTrack& track, std::size_t landmark_index);

/// Pearson correlation, clamped to [-1, 1]; empty when either series has
/// zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// Correlation between the speed series of the two mouth corners.
/// Needs at least three frames; empty on zero variance.
std::optional<double> corner_correlation(const NormalizedTrack& track);

}  // namespace bulbar::video
