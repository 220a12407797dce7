#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar::audio {

struct PitchConfig {
    double f0_floor = 75.0;     // Hz
    double f0_ceiling = 500.0;  // Hz
    double window_s = 0.040;
    double hop_s = 0.010;
    double voicing_threshold = 0.45;
};

/// Frame-wise pitch estimate. f0 is 0 for unvoiced frames.
struct PitchTrack {
    std::vector<double> frame_times;  // window centres, seconds
    std::vector<double> f0;
    std::vector<bool> voiced;
    std::vector<double> strength;  // interpolated correlation peak
    double window_s = 0.0;
    double hop_s = 0.0;

    std::size_t size() const { return frame_times.size(); }
    std::size_t voiced_count() const;
    std::vector<double> voiced_f0() const;
};

/// Normalized autocorrelation of a (mean-removed) frame at an integer lag:
/// sum x[n]x[n+lag] over the overlap, divided by the geometric mean of the
/// two overlap energies. 0 when either energy vanishes.
double normalized_autocorrelation(std::span<const double> frame, std::size_t lag);

/// Linear interpolation between the two neighbouring integer lags.
double normalized_autocorrelation(std::span<const double> frame, double lag);

/// Copies `length` samples centred on `centre_s`, mean removed. Returns an
/// empty vector when the window does not fit inside the clip.
std::vector<double> analysis_frame(const AudioClip& clip, double centre_s, std::size_t length);

/// Autocorrelation pitch tracker: per frame the normalized autocorrelation
/// is searched over lags [1/ceiling, 1/floor]; the earliest local peak within
/// 10% of the strongest one is refined by parabolic interpolation. A frame
/// is voiced iff that peak reaches the voicing threshold.
PitchTrack estimate_pitch(const AudioClip& clip, const PitchConfig& cfg = {});

}  // namespace bulbar::audio
