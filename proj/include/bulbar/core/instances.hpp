#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar {

inline constexpr std::size_t kAudioFeatureCount = 18;
inline constexpr std::size_t kVideoFeatureCount = 15;

/// Canonical column order of the audio feature vector.
inline constexpr std::array<std::string_view, kAudioFeatureCount> kAudioFeatureNames = {
    "f0_mean",         "f0_sd",          "f0_median",
    "f0_min",          "f0_max",         "f0_range",
    "jitter_local",    "jitter_rap",     "jitter_ppq5",
    "shimmer_local",   "shimmer_apq3",   "shimmer_apq5",
    "hnr_mean",        "sentence_duration_s", "inter_sentence_duration_s",
    "pause_duration_s", "wer",           "dtw_to_template",
};

/// Canonical column order of the video feature vector.
inline constexpr std::array<std::string_view, kVideoFeatureCount> kVideoFeatureNames = {
    "path_lower_lip",    "path_jaw",          "mouth_area_mean_rel", "mouth_area_range_rel",
    "vel_width_max",     "vel_width_min",     "vel_lower_lip_max",   "vel_lower_lip_min",
    "vel_jaw_max",       "vel_jaw_min",       "jaw_jerk_rms",        "lr_area_absdiff",
    "corner_corr",       "ecc_mean",          "ecc_range",
};

namespace audio_index {
enum : std::size_t {
    f0_mean, f0_sd, f0_median, f0_min, f0_max, f0_range,
    jitter_local, jitter_rap, jitter_ppq5,
    shimmer_local, shimmer_apq3, shimmer_apq5,
    hnr_mean, sentence_duration_s, inter_sentence_duration_s, pause_duration_s,
    wer, dtw_to_template,
};
}  // namespace audio_index

namespace video_index {
enum : std::size_t {
    path_lower_lip, path_jaw, mouth_area_mean_rel, mouth_area_range_rel,
    vel_width_max, vel_width_min, vel_lower_lip_max, vel_lower_lip_min,
    vel_jaw_max, vel_jaw_min, jaw_jerk_rms, lr_area_absdiff,
    corner_corr, ecc_mean, ecc_range,
};
}  // namespace video_index

using AudioFeatures = std::array<double, kAudioFeatureCount>;
using VideoFeatures = std::array<double, kVideoFeatureCount>;

/// Feature values of one repetition, any of which may be missing. Each
/// missing value carries a reason for the exclusion log.
template <std::size_t N>
struct FeatureRow {
    std::array<std::optional<double>, N> values{};
    std::vector<std::string> missing_reasons;
    std::vector<std::string> warnings;

    bool complete() const {
        for (const auto& v : values) {
            if (!v) return false;
        }
        return true;
    }

    std::optional<std::array<double, N>> dense() const {
        if (!complete()) return std::nullopt;
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) out[i] = *values[i];
        return out;
    }
};

using AudioFeatureRow = FeatureRow<kAudioFeatureCount>;
using VideoFeatureRow = FeatureRow<kVideoFeatureCount>;

enum class Modality { Audio, Video, Multimodal };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view s);
std::size_t feature_count(Modality m);
std::vector<std::string> feature_names(Modality m);

/// Complete feature vectors of one subject keyed by repetition index.
struct SubjectFeatures {
    std::string subject_id;
    Group group = Group::HC;
    double target = 0.0;
    std::map<int, AudioFeatures> audio;
    std::map<int, VideoFeatures> video;
};

struct Instance {
    std::string subject_id;
    Group group = Group::HC;
    int repetition = 0;
    std::optional<AudioFeatures> audio;
    std::optional<VideoFeatures> video;
    double target = 0.0;

    /// Audio columns, video columns, or audio followed by video.
    std::vector<double> features(Modality m) const;
};

struct ReconcileOptions {
    /// Repetition 1 is the DTW template; it is always dropped where audio
    /// features participate. This controls video-only mode.
    bool exclude_template_in_video = true;
};

inline constexpr int kTemplateRepetition = 1;

/// Builds modeling instances for one modality. Multimodal keeps the
/// (subject, repetition) keys present in both modalities. Throws
/// ValidationError when nothing remains.
std::vector<Instance> reconcile_instances(const std::vector<SubjectFeatures>& subjects,
                                          Modality modality, const ReconcileOptions& options = {});

}  // namespace bulbar
