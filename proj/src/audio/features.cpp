#include "bulbar/audio/features.hpp"

#include <fmt/format.h>

#include "bulbar/audio/dtw.hpp"
#include "bulbar/audio/perturbation.hpp"
#include "bulbar/audio/wer.hpp"
#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

template <typename Fn>
void attempt(AudioFeatureRow& row, std::string_view what, Fn&& fn) {
    try {
        fn();
    } catch (const MissingFeatureError& e) {
        row.missing_reasons.push_back(fmt::format("{}: {}", what, e.what()));
    } catch (const ValidationError& e) {
        row.missing_reasons.push_back(fmt::format("{}: {}", what, e.what()));
    }
}

void set_optional(AudioFeatureRow& row, std::size_t index, const std::optional<double>& v,
                  std::string_view reason) {
    if (v) {
        row.values[index] = *v;
    } else {
        row.missing_reasons.push_back(fmt::format("{}: {}", kAudioFeatureNames[index], reason));
    }
}

}  // namespace

AudioFeatureRow audio_features(const AudioClip& segment, const RepetitionContext& ctx,
                               const AudioConfig& cfg) {
    namespace ix = audio_index;
    AudioFeatureRow row;

    std::optional<PitchTrack> pitch;
    attempt(row, "pitch", [&] { pitch = estimate_pitch(segment, cfg.pitch); });

    if (pitch) {
        attempt(row, "f0", [&] {
            const F0Stats s = f0_stats(*pitch);
            row.values[ix::f0_mean] = s.mean;
            row.values[ix::f0_sd] = s.sd;
            row.values[ix::f0_median] = s.median;
            row.values[ix::f0_min] = s.min;
            row.values[ix::f0_max] = s.max;
            row.values[ix::f0_range] = s.range;
        });
        attempt(row, "cycles", [&] {
            const PeriodSequence ps = extract_periods(segment, *pitch);
            std::optional<Perturbation> jitter, shimmer;
            attempt(row, "jitter", [&] { jitter = jitter_metrics(ps); });
            attempt(row, "shimmer", [&] { shimmer = shimmer_metrics(ps); });
            if (jitter) {
                set_optional(row, ix::jitter_local, jitter->local, "too few cycles");
                set_optional(row, ix::jitter_rap, jitter->three_point, "fewer than 3 cycles");
                set_optional(row, ix::jitter_ppq5, jitter->five_point, "fewer than 5 cycles");
            }
            if (shimmer) {
                set_optional(row, ix::shimmer_local, shimmer->local, "too few cycles");
                set_optional(row, ix::shimmer_apq3, shimmer->three_point, "fewer than 3 cycles");
                set_optional(row, ix::shimmer_apq5, shimmer->five_point, "fewer than 5 cycles");
            }
        });
        attempt(row, "hnr_mean", [&] { row.values[ix::hnr_mean] = hnr_mean(segment, *pitch); });
    }

    row.values[ix::sentence_duration_s] = ctx.span.duration_s();
    set_optional(row, ix::inter_sentence_duration_s, ctx.preceding_gap_s, "no preceding repetition");
    attempt(row, "pause_duration_s",
            [&] { row.values[ix::pause_duration_s] = detect_pauses(segment, cfg.pause); });

    if (ctx.transcript) {
        attempt(row, "wer", [&] {
            row.values[ix::wer] = word_error_rate(ctx.reference_text, *ctx.transcript);
        });
    } else {
        row.missing_reasons.emplace_back("wer: no transcript line");
    }

    if (ctx.template_mfcc) {
        attempt(row, "dtw_to_template", [&] {
            row.values[ix::dtw_to_template] = dtw_distance(mfcc(segment, cfg.mfcc), *ctx.template_mfcc);
        });
    } else {
        row.missing_reasons.emplace_back("dtw_to_template: no template repetition");
    }
    return row;
}

}  // namespace bulbar::audio
