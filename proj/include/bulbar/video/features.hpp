#pragma once

#include "bulbar/core/instances.hpp"
#include "bulbar/video/geometry.hpp"
#include "bulbar/video/normalize.hpp"

namespace bulbar::video {

inline constexpr std::size_t kMinSegmentFrames = 4;

/// Computes the 15 video features of one normalized repetition segment in
/// canonical order. Mouth-area mean is relative to `rest.area`;
/// lower-lip and jaw velocities use the vertical coordinate; jaw jerk is
/// the RMS third derivative of the jaw's vertical position.
VideoFeatureRow video_features(const NormalizedTrack& segment, const MouthGeometry& rest);

}  // namespace bulbar::video
