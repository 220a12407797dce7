#include "bulbar/video/features.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bulbar/error.hpp"
#include "bulbar/video/kinematics.hpp"

namespace bulbar::video {

VideoFeatureRow video_features(const NormalizedTrack& segment, const MouthGeometry& rest) {
    namespace ix = video_index;
    VideoFeatureRow row;
    if (segment.size() < kMinSegmentFrames) {
        row.missing_reasons.push_back(fmt::format("segment has {} frames (need {})", segment.size(),
                                                  kMinSegmentFrames));
        return row;
    }
    const double fr = segment.frame_rate;

    row.values[ix::path_lower_lip] = cumulative_path(segment, landmark::lower_lip_mid);
    row.values[ix::path_jaw] = cumulative_path(segment, landmark::chin);

    std::vector<double> area, width, ecc, lr_diff;
    std::size_t crossing_frames = 0;
    for (const auto& frame : segment.frames) {
        const MouthGeometry g = mouth_geometry(frame);
        area.push_back(g.area);
        width.push_back(g.width);
        ecc.push_back(g.eccentricity);
        lr_diff.push_back(std::abs(g.area_right - g.area_left));
        if (g.self_intersecting) ++crossing_frames;
    }
    if (crossing_frames > 0) {
        row.warnings.push_back(
            fmt::format("self-intersecting lip contour in {} frames", crossing_frames));
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    const auto [amin, amax] = std::minmax_element(area.begin(), area.end());
    row.values[ix::mouth_area_mean_rel] = mean(area) - rest.area;
    row.values[ix::mouth_area_range_rel] = *amax - *amin;

    const DerivativeStats vw = derivative_stats(width, fr, 1);
    row.values[ix::vel_width_max] = vw.max;
    row.values[ix::vel_width_min] = vw.min;

    const auto lip_y = coordinate_series(segment, landmark::lower_lip_mid, 1);
    const DerivativeStats vl = derivative_stats(lip_y, fr, 1);
    row.values[ix::vel_lower_lip_max] = vl.max;
    row.values[ix::vel_lower_lip_min] = vl.min;

    const auto jaw_y = coordinate_series(segment, landmark::chin, 1);
    const DerivativeStats vj = derivative_stats(jaw_y, fr, 1);
    row.values[ix::vel_jaw_max] = vj.max;
    row.values[ix::vel_jaw_min] = vj.min;
    row.values[ix::jaw_jerk_rms] = derivative_stats(jaw_y, fr, 3).rms;

    row.values[ix::lr_area_absdiff] = mean(lr_diff);

    if (auto r = corner_correlation(segment)) {
        row.values[ix::corner_corr] = *r;
    } else {
        row.missing_reasons.emplace_back("corner_corr: zero variance in a mouth-corner speed series");
    }

    const auto [emin, emax] = std::minmax_element(ecc.begin(), ecc.end());
    row.values[ix::ecc_mean] = mean(ecc);
    row.values[ix::ecc_range] = *emax - *emin;
    return row;
}

}  // namespace bulbar::video
