#pragma once

#include <Eigen/Dense>

#include "bulbar/core/types.hpp"

namespace bulbar::audio {

struct MfccConfig {
    double window_s = 0.025;
    double hop_s = 0.010;
    int n_mels = 26;
    int n_coeffs = 13;
};

/// Rows are frames, columns cepstral coefficients.
using FeatureMatrix = Eigen::MatrixXd;

/// Hann window, magnitude spectrum, triangular mel filterbank spanning
/// 0 Hz to Nyquist, natural log, orthonormal DCT-II. Produces
/// floor((N - W) / H) + 1 frames; throws ValidationError for clips shorter
/// than one window.
FeatureMatrix mfcc(const AudioClip& clip, const MfccConfig& cfg = {});

}  // namespace bulbar::audio
