#include "bulbar/video/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bulbar/error.hpp"

namespace bulbar::video {

namespace {

double distance(const Point3& a, const Point3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double planar_distance(const Point3& a, const Point3& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

double cross(const Point3& o, const Point3& a, const Point3& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool segments_cross(const Point3& p1, const Point3& p2, const Point3& q1, const Point3& q2) {
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool self_intersects(const std::vector<Point3>& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return true;
        }
    }
    return false;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

double shoelace_area(const std::vector<Point3>& polygon) {
    double twice = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point3& a = polygon[i];
        const Point3& b = polygon[(i + 1) % n];
        twice += a[0] * b[1] - b[0] * a[1];
    }
    return std::abs(twice) / 2.0;
}

double ellipse_eccentricity(double width, double height) {
    const double a = std::max(width, height) / 2.0;
    const double b = std::min(width, height) / 2.0;
    if (!(a > 0.0)) return 0.0;
    const double ratio = b / a;
    return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

MouthGeometry mouth_geometry(const LandmarkFrame& frame) {
    using namespace landmark;
    MouthGeometry g;
    g.width = distance(frame[mouth_corner_right], frame[mouth_corner_left]);
    g.height = distance(frame[upper_lip_mid], frame[lower_lip_mid]);

    std::vector<Point3> outer(frame.begin() + outer_lip_first, frame.begin() + outer_lip_last + 1);
    g.area = shoelace_area(outer);
    g.self_intersecting = self_intersects(outer);

    // 48..51 then 57..59 on the right; 51..57 on the left.
    std::vector<Point3> right(frame.begin() + mouth_corner_right, frame.begin() + upper_lip_mid + 1);
    right.insert(right.end(), frame.begin() + lower_lip_mid, frame.begin() + outer_lip_last + 1);
    std::vector<Point3> left(frame.begin() + upper_lip_mid, frame.begin() + lower_lip_mid + 1);
    g.area_right = shoelace_area(right);
    g.area_left = shoelace_area(left);

    g.eccentricity = ellipse_eccentricity(planar_distance(frame[mouth_corner_right], frame[mouth_corner_left]),
                                          planar_distance(frame[upper_lip_mid], frame[lower_lip_mid]));
    return g;
}

MouthGeometry rest_geometry(const NormalizedTrack& track, const std::vector<IndexRange>& spans) {
    std::vector<std::size_t> rest_frames;
    for (std::size_t f = 0; f < track.size(); ++f) {
        const bool inside = std::any_of(spans.begin(), spans.end(),
                                        [f](const IndexRange& r) { return f >= r.begin && f < r.end; });
        if (!inside) rest_frames.push_back(f);
    }
    if (rest_frames.empty()) {
        for (std::size_t f = 0; f < std::min<std::size_t>(5, track.size()); ++f) rest_frames.push_back(f);
    }
    if (rest_frames.empty()) throw MissingFeatureError("no frames available for the rest reference");

    std::vector<double> w, h, a, ar, al, e;
    for (std::size_t f : rest_frames) {
        const MouthGeometry g = mouth_geometry(track.frames[f]);
        w.push_back(g.width);
        h.push_back(g.height);
        a.push_back(g.area);
        ar.push_back(g.area_right);
        al.push_back(g.area_left);
        e.push_back(g.eccentricity);
    }
    MouthGeometry rest;
    rest.width = median(w);
    rest.height = median(h);
    rest.area = median(a);
    rest.area_right = median(ar);
    rest.area_left = median(al);
    rest.eccentricity = median(e);
    return rest;
}

}  // namespace bulbar::video
