#pragma once

#include <cstddef>
#include <vector>

#include "bulbar/core/slicing.hpp"
#include "bulbar/core/types.hpp"

namespace bulbar::video {

/// 0-based indices in the 68-point landmark scheme.
namespace landmark {
inline constexpr std::size_t chin = 8;
inline constexpr std::size_t inner_eye_right = 39;
inline constexpr std::size_t inner_eye_left = 42;
inline constexpr std::size_t mouth_corner_right = 48;
inline constexpr std::size_t upper_lip_mid = 51;
inline constexpr std::size_t mouth_corner_left = 54;
inline constexpr std::size_t lower_lip_mid = 57;
inline constexpr std::size_t outer_lip_first = 48;
inline constexpr std::size_t outer_lip_last = 59;
}  // namespace landmark

/// Landmarks in intercanthal units: per frame the inner-eye-corner midpoint
/// is the origin, the right-to-left eye-corner axis points along +x, and
/// the eye corners are one unit apart.
struct NormalizedTrack {
    std::vector<LandmarkFrame> frames;
    double frame_rate = 0.0;

    std::size_t size() const { return frames.size(); }
    NormalizedTrack segment(IndexRange range) const;
};

/// Throws ValidationError naming the first frame whose eye corners coincide.
NormalizedTrack normalize_track(const LandmarkTrack& track);

LandmarkFrame normalize_frame(const LandmarkFrame& frame, std::size_t frame_index = 0);

}  // namespace bulbar::video
