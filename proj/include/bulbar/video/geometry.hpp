#pragma once

#include <vector>

#include "bulbar/core/slicing.hpp"
#include "bulbar/video/normalize.hpp"

namespace bulbar::video {

struct MouthGeometry {
    double width = 0.0;   // corner to corner
    double height = 0.0;  // upper-lip mid to lower-lip mid
    double area = 0.0;    // outer-lip contour, x-y projection
    double area_right = 0.0;
    double area_left = 0.0;
    double eccentricity = 0.0;
    bool self_intersecting = false;
};

/// Signed-area magnitude of a closed x-y polygon.
double shoelace_area(const std::vector<Point3>& polygon);

/// Eccentricity of the ellipse with axes max(w,h) and min(w,h).
double ellipse_eccentricity(double width, double height);

/// Widths and heights use full 3D distance; areas and eccentricity use the
/// x-y projection. The half-mouth areas are closed through the lip
/// midpoints (51 and 57).
MouthGeometry mouth_geometry(const LandmarkFrame& frame);

/// Median of each geometry field over frames outside every span; the
/// first five frames when no such frame exists.
MouthGeometry rest_geometry(const NormalizedTrack& track, const std::vector<IndexRange>& spans);

}  // namespace bulbar::video
