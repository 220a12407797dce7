#pragma once

#include <optional>
#include <string>

#include "bulbar/audio/envelope.hpp"
#include "bulbar/audio/mfcc.hpp"
#include "bulbar/audio/pitch.hpp"
#include "bulbar/core/instances.hpp"

namespace bulbar::audio {

struct AudioConfig {
    PitchConfig pitch;
    PauseConfig pause;
    MfccConfig mfcc;
};

/// Per-repetition inputs that live outside the segment itself.
struct RepetitionContext {
    RepetitionSpan span;
    /// MFCC of the subject's first repetition; absent when it was not
    /// annotated or could not be computed.
    const FeatureMatrix* template_mfcc = nullptr;
    /// Gap between the previous repetition's offset and this onset.
    std::optional<double> preceding_gap_s;
    std::optional<std::string> transcript;
    std::string reference_text;
};

/// Computes the 18 audio features in canonical order. Values that cannot
/// be computed stay empty and the reason is recorded.
AudioFeatureRow audio_features(const AudioClip& segment, const RepetitionContext& ctx,
                               const AudioConfig& cfg = {});

}  // namespace bulbar::audio
