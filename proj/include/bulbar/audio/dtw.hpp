#pragma once

#include "bulbar/audio/mfcc.hpp"

namespace bulbar::audio {

/// Dynamic time warping with Euclidean frame distance and steps
/// {(1,0), (0,1), (1,1)}. Returns the minimal total path cost divided by
/// the number of cells on that path; among equal-cost paths the shortest
/// one is used. Throws ValidationError for empty input or mismatched
/// column counts.
double dtw_distance(const FeatureMatrix& a, const FeatureMatrix& b);

}  // namespace bulbar::audio
