#include "bulbar/video/normalize.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::video {

NormalizedTrack NormalizedTrack::segment(IndexRange range) const {
    NormalizedTrack out;
    out.frame_rate = frame_rate;
    out.frames.assign(frames.begin() + static_cast<std::ptrdiff_t>(range.begin),
                      frames.begin() + static_cast<std::ptrdiff_t>(range.end));
    return out;
}

LandmarkFrame normalize_frame(const LandmarkFrame& frame, std::size_t frame_index) {
    const Point3& r = frame[landmark::inner_eye_right];
    const Point3& l = frame[landmark::inner_eye_left];
    const Point3 mid{(r[0] + l[0]) / 2.0, (r[1] + l[1]) / 2.0, (r[2] + l[2]) / 2.0};
    const double dx = l[0] - r[0], dy = l[1] - r[1], dz = l[2] - r[2];
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(dist > 0.0)) {
        throw ValidationError(
            fmt::format("degenerate frame {}: inner eye corners coincide", frame_index));
    }
    const double planar = std::hypot(dx, dy);
    // Rotation taking the planar eye axis onto +x (identity if the axis is
    // purely along z).
    const double c = planar > 0.0 ? dx / planar : 1.0;
    const double s = planar > 0.0 ? dy / planar : 0.0;
    const double inv = 1.0 / dist;

    LandmarkFrame out;
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const double x = frame[i][0] - mid[0];
        const double y = frame[i][1] - mid[1];
        const double z = frame[i][2] - mid[2];
        out[i] = {(c * x + s * y) * inv, (-s * x + c * y) * inv, z * inv};
    }
    return out;
}

NormalizedTrack normalize_track(const LandmarkTrack& track) {
    NormalizedTrack out;
    out.frame_rate = track.frame_rate;
    out.frames.reserve(track.frames.size());
    for (std::size_t f = 0; f < track.frames.size(); ++f) {
        out.frames.push_back(normalize_frame(track.frames[f], f));
    }
    return out;
}

}  // namespace bulbar::video
