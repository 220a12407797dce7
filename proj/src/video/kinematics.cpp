#include "bulbar/video/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::video {

double cumulative_path(const NormalizedTrack& track, std::size_t landmark_index) {
    if (track.size() < 2) throw MissingFeatureError("path needs at least two frames");
    double total = 0.0;
    for (double s : speed_series(track, landmark_index)) total += s;
    return total;
}

DerivativeStats derivative_stats(std::span<const double> signal, double frame_rate, int order) {
    if (order < 1) throw ValidationError(fmt::format("derivative order {} must be >= 1", order));
    if (signal.size() < static_cast<std::size_t>(order) + 1) {
        throw MissingFeatureError(fmt::format("order-{} derivative needs {} frames, got {}", order,
                                              order + 1, signal.size()));
    }
    std::vector<double> d(signal.begin(), signal.end());
    for (int k = 0; k < order; ++k) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = (d[i + 1] - d[i]) * frame_rate;
        d.pop_back();
    }
    DerivativeStats s;
    s.max = *std::max_element(d.begin(), d.end());
    s.min = *std::min_element(d.begin(), d.end());
    double sq = 0.0;
    for (double v : d) sq += v * v;
    s.rms = std::sqrt(sq / static_cast<double>(d.size()));
    return s;
}

std::vector<double> coordinate_series(const NormalizedTrack& track, std::size_t landmark_index,
                                      std::size_t axis) {
    std::vector<double> out;
    out.reserve(track.size());
    for (const auto& f : track.frames) out.push_back(f[landmark_index][axis]);
    return out;
}

std::vector<double> speed_series(const NormalizedTrack& track, std::size_t landmark_index) {
    std::vector<double> out;
    for (std::size_t f = 1; f < track.size(); ++f) {
        const Point3& a = track.frames[f - 1][landmark_index];
        const Point3& b = track.frames[f][landmark_index];
        const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
        out.push_back(std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return out;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return std::nullopt;
    const double ma = std::accumulate(a.begin(), a.begin() + n, 0.0) / static_cast<double>(n);
    const double mb = std::accumulate(b.begin(), b.begin() + n, 0.0) / static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    // Relative guard: series that are constant up to rounding count as
    // zero-variance.
    const double scale_a = std::max(1.0, ma * ma) * static_cast<double>(n);
    const double scale_b = std::max(1.0, mb * mb) * static_cast<double>(n);
    if (saa <= 1e-24 * scale_a || sbb <= 1e-24 * scale_b) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> corner_correlation(const NormalizedTrack& track) {
    if (track.size() < 3) throw MissingFeatureError("corner correlation needs at least three frames");
    const auto right = speed_series(track, landmark::mouth_corner_right);
    const auto left = speed_series(track, landmark::mouth_corner_left);
    return pearson(right, left);
}

}  // namespace bulbar::video
