#pragma once

#include <string>
#include <vector>

#include "bulbar/audio/features.hpp"
#include "bulbar/core/instances.hpp"
#include "bulbar/core/manifest.hpp"

namespace bulbar::report {

template <typename Row>
struct RepetitionRow {
    std::string subject_id;
    Group group = Group::HC;
    int repetition = 0;
    Row features;
};

using AudioRepetitionRow = RepetitionRow<AudioFeatureRow>;
using VideoRepetitionRow = RepetitionRow<VideoFeatureRow>;

/// Every annotated repetition with whatever features could be computed.
struct FeatureTable {
    /// Manifest order; only complete feature vectors are kept here.
    std::vector<SubjectFeatures> subjects;
    std::vector<AudioRepetitionRow> audio_rows;
    std::vector<VideoRepetitionRow> video_rows;
    std::vector<std::string> warnings;
};

struct PipelineConfig {
    audio::AudioConfig audio;
    unsigned threads = 0;
};

/// Loads every recording of the manifest and computes per-repetition
/// features. Recordings without annotations fall back to envelope-based
/// span suggestions (with a warning). Throws IoError / ValidationError
/// (message names the offending file) for unreadable or malformed inputs.
FeatureTable extract_features(const DatasetManifest& manifest, const PipelineConfig& config);

struct Exclusion {
    std::string subject_id;
    int repetition = 0;
    Modality modality = Modality::Audio;
    std::string reason;
};

struct ModalityData {
    std::vector<Instance> instances;
    std::vector<Exclusion> exclusions;
    /// Annotated repetitions that carry the modality (for multimodal, that
    /// carry either). Always instances.size() + exclusions.size().
    std::size_t candidates = 0;
};

/// Modeling instances for one modality plus one exclusion per candidate
/// repetition that did not become an instance.
ModalityData build_modality(const FeatureTable& table, Modality modality, const ReconcileOptions& options);

}  // namespace bulbar::report
