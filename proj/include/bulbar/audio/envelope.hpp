#pragma once

#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar::audio {

struct EnvelopeFrame {
    double time_s;  // start of the analysis window
    double rms;
};

struct Envelope {
    std::vector<EnvelopeFrame> frames;
    double window_s = 0.0;  // effective, after rounding to whole samples
    double hop_s = 0.0;

    double peak() const;
};

/// Frame k covers samples [k*hop, k*hop + window). Only whole windows are
/// emitted; throws ValidationError if the clip is shorter than one window
/// or the framing is invalid (0 < hop <= window).
Envelope rms_envelope(const AudioClip& clip, double window_s, double hop_s);

struct SpanSuggestionConfig {
    double rel_threshold_db = -25.0;
    double min_speech_s = 0.2;
    double min_gap_s = 0.1;
};

/// Proposes repetition spans from runs of frames whose RMS exceeds the
/// peak RMS shifted by `rel_threshold_db`. Runs separated by less than
/// min_gap_s are merged; merged runs shorter than min_speech_s are dropped.
/// Advisory only: manual annotations take precedence.
std::vector<RepetitionSpan> suggest_spans(const Envelope& envelope,
                                          const SpanSuggestionConfig& cfg = {});

struct PauseConfig {
    double rel_threshold_db = -25.0;
    double min_pause_s = 0.060;
    double window_s = 0.025;
    double hop_s = 0.010;
};

/// Total duration of sub-threshold runs lasting at least min_pause_s that
/// touch neither edge of the segment. A run spans from its first window
/// start to its last window end.
double detect_pauses(const AudioClip& segment, const PauseConfig& cfg = {});

}  // namespace bulbar::audio
