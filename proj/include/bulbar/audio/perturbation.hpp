#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bulbar/audio/pitch.hpp"
#include "bulbar/core/types.hpp"

namespace bulbar::audio {

/// Glottal cycles found in the voiced regions of a clip.
struct PeriodSequence {
    std::vector<double> periods;          // seconds
    std::vector<double> peak_amplitudes;  // |waveform| at the cycle's opening mark
};

/// Places one cycle mark per expected period inside each voiced region:
/// the first mark is the largest |sample| in the region's first period,
/// each following mark is the largest |sample| within 30% of a period of
/// the position predicted from the local f0. Marks are refined to sub-sample
/// precision by parabolic interpolation. Cycles touching a mark weaker than
/// 30% of the region's median mark amplitude are dropped. Throws
/// MissingFeatureError when no voiced region yields a cycle.
PeriodSequence extract_periods(const AudioClip& clip, const PitchTrack& pitch);

struct F0Stats {
    double mean, sd, median, min, max, range;
};

/// Statistics over voiced-frame f0 values (sample SD; 0 for a single
/// frame). Throws MissingFeatureError without voiced frames.
F0Stats f0_stats(const PitchTrack& pitch);

/// Relative perturbation of a cycle-level series: mean absolute
/// first difference, and mean deviation from the 3- and 5-point moving
/// average, each divided by the series mean.
struct Perturbation {
    std::optional<double> local;
    std::optional<double> three_point;  // jitter RAP / shimmer APQ3
    std::optional<double> five_point;   // jitter PPQ5 / shimmer APQ5
};

/// Throws MissingFeatureError for fewer than 2 values; the 3- and
/// 5-point measures stay empty below 3 and 5 values.
Perturbation perturbation(std::span<const double> series);

inline Perturbation jitter_metrics(const PeriodSequence& ps) { return perturbation(ps.periods); }
inline Perturbation shimmer_metrics(const PeriodSequence& ps) {
    return perturbation(ps.peak_amplitudes);
}

/// 10*log10(r / (1 - r)) with r clamped to [1e-6, 1 - 1e-6].
double hnr_from_correlation(double r);

/// Mean over voiced frames of the HNR implied by the normalized
/// autocorrelation at the frame's f0 lag. Throws MissingFeatureError
/// without voiced frames.
double hnr_mean(const AudioClip& clip, const PitchTrack& pitch);

}  // namespace bulbar::audio
