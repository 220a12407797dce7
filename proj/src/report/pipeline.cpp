#include "bulbar/report/pipeline.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "bulbar/audio/envelope.hpp"
#include "bulbar/audio/mfcc.hpp"
#include "bulbar/core/annotations.hpp"
#include "bulbar/core/landmarks_io.hpp"
#include "bulbar/core/slicing.hpp"
#include "bulbar/core/wav.hpp"
#include "bulbar/error.hpp"
#include "bulbar/eval/parallel.hpp"
#include "bulbar/video/features.hpp"
#include "bulbar/video/geometry.hpp"
#include "bulbar/video/normalize.hpp"

namespace bulbar::report {

namespace {

struct SubjectExtraction {
    SubjectFeatures features;
    std::vector<AudioRepetitionRow> audio_rows;
    std::vector<VideoRepetitionRow> video_rows;
    std::vector<std::string> warnings;
};

struct AudioSegment {
    RepetitionSpan span;
    AudioClip clip;
    std::optional<double> gap;
    std::optional<std::string> transcript;
};

std::vector<RepetitionSpan> recording_spans(const DatasetManifest& manifest, const Recording& rec,
                                            const std::optional<AudioClip>& clip, const std::string& where,
                                            std::vector<std::string>& warnings) {
    if (rec.annotations_csv) return load_annotations(manifest.resolve(*rec.annotations_csv));
    if (!clip) throw ValidationError(fmt::format("{}: no annotations and no audio to suggest spans from", where));
    auto spans = audio::suggest_spans(audio::rms_envelope(*clip, 0.025, 0.010));
    warnings.push_back(fmt::format("{}: no annotations, using {} suggested spans", where, spans.size()));
    return spans;
}

template <typename Row>
Row all_missing(const std::string& reason) {
    Row row;
    row.missing_reasons.push_back(reason);
    return row;
}

SubjectExtraction extract_subject(const DatasetManifest& manifest, const SubjectEntry& entry,
                                  const PipelineConfig& config) {
    SubjectExtraction out;
    const auto& rec0 = entry.record;
    out.features.subject_id = rec0.subject_id;
    out.features.group = rec0.group;
    out.features.target = rec0.target();

    std::vector<AudioSegment> audio_segments;
    std::set<int> seen_reps;
    // Video rows are computed per recording because rest geometry is.
    for (std::size_t r = 0; r < entry.recordings.size(); ++r) {
        const Recording& rec = entry.recordings[r];
        const std::string where = fmt::format("subject '{}' recording {}", rec0.subject_id, r);
        std::optional<AudioClip> clip;
        if (rec.audio_wav) clip = load_audio(manifest.resolve(*rec.audio_wav));
        const auto spans = recording_spans(manifest, rec, clip, where, out.warnings);
        for (const auto& s : spans) {
            if (!seen_reps.insert(s.index).second) {
                throw ValidationError(
                    fmt::format("{}: repetition {} is annotated more than once", where, s.index));
            }
        }

        if (clip) {
            std::vector<std::string> transcripts;
            if (rec.transcripts_txt) transcripts = load_transcripts(manifest.resolve(*rec.transcripts_txt));
            std::vector<AudioClip> segments;
            try {
                segments = slice_spans(*clip, spans);
            } catch (const ValidationError& e) {
                throw ValidationError(fmt::format("{}: {}: {}", where, *rec.audio_wav, e.what()));
            }
            for (std::size_t i = 0; i < spans.size(); ++i) {
                AudioSegment seg{spans[i], std::move(segments[i]), std::nullopt, std::nullopt};
                if (i > 0) seg.gap = spans[i].onset_s - spans[i - 1].offset_s;
                const auto line = static_cast<std::size_t>(spans[i].index - 1);
                if (line < transcripts.size()) seg.transcript = transcripts[line];
                audio_segments.push_back(std::move(seg));
            }
        }

        if (rec.landmarks_csv) {
            const LandmarkTrack track = load_landmarks(manifest.resolve(*rec.landmarks_csv), *rec.frame_rate);
            std::vector<IndexRange> ranges;
            try {
                for (const auto& s : spans) ranges.push_back(span_indices(s, track.rate(), track.size()));
            } catch (const ValidationError& e) {
                throw ValidationError(fmt::format("{}: {}: {}", where, *rec.landmarks_csv, e.what()));
            }
            std::optional<video::NormalizedTrack> norm;
            std::string failure;
            try {
                norm = video::normalize_track(track);
            } catch (const ValidationError& e) {
                failure = fmt::format("normalization failed: {}", e.what());
            }
            std::optional<video::MouthGeometry> rest;
            if (norm) rest = video::rest_geometry(*norm, ranges);
            for (std::size_t i = 0; i < spans.size(); ++i) {
                VideoRepetitionRow row{rec0.subject_id, rec0.group, spans[i].index, {}};
                if (norm) {
                    row.features = video::video_features(norm->segment(ranges[i]), *rest);
                } else {
                    row.features = all_missing<VideoFeatureRow>(failure);
                }
                out.video_rows.push_back(std::move(row));
            }
        }
    }

    std::sort(audio_segments.begin(), audio_segments.end(),
              [](const AudioSegment& a, const AudioSegment& b) { return a.span.index < b.span.index; });
    std::optional<audio::FeatureMatrix> template_mfcc;
    for (const auto& seg : audio_segments) {
        if (seg.span.index != kTemplateRepetition) continue;
        try {
            template_mfcc = audio::mfcc(seg.clip, config.audio.mfcc);
        } catch (const ValidationError& e) {
            out.warnings.push_back(fmt::format("subject '{}': template MFCC failed: {}", rec0.subject_id, e.what()));
        }
    }
    for (const auto& seg : audio_segments) {
        audio::RepetitionContext ctx;
        ctx.span = seg.span;
        ctx.template_mfcc = template_mfcc ? &*template_mfcc : nullptr;
        ctx.preceding_gap_s = seg.gap;
        ctx.transcript = seg.transcript;
        ctx.reference_text = manifest.reference_text;
        AudioRepetitionRow row{rec0.subject_id, rec0.group, seg.span.index, audio::audio_features(seg.clip, ctx, config.audio)};
        out.audio_rows.push_back(std::move(row));
    }
    std::sort(out.video_rows.begin(), out.video_rows.end(),
              [](const auto& a, const auto& b) { return a.repetition < b.repetition; });

    for (const auto& row : out.audio_rows) {
        if (auto dense = row.features.dense()) out.features.audio[row.repetition] = *dense;
    }
    for (const auto& row : out.video_rows) {
        if (auto dense = row.features.dense()) out.features.video[row.repetition] = *dense;
        for (const auto& w : row.features.warnings) {
            out.warnings.push_back(fmt::format("subject '{}' rep {}: {}", rec0.subject_id, row.repetition, w));
        }
    }
    return out;
}

template <typename Row>
std::string join_reasons(const Row& row) {
    std::string out;
    for (const auto& r : row.missing_reasons) {
        if (!out.empty()) out += "; ";
        out += r;
    }
    return out.empty() ? "incomplete features" : out;
}

}  // namespace

FeatureTable extract_features(const DatasetManifest& manifest, const PipelineConfig& config) {
    std::vector<SubjectExtraction> parts(manifest.subjects.size());
    eval::parallel_for(manifest.subjects.size(), config.threads, [&](std::size_t i) {
        parts[i] = extract_subject(manifest, manifest.subjects[i], config);
    });
    FeatureTable table;
    for (auto& p : parts) {
        table.subjects.push_back(std::move(p.features));
        for (auto& r : p.audio_rows) table.audio_rows.push_back(std::move(r));
        for (auto& r : p.video_rows) table.video_rows.push_back(std::move(r));
        for (auto& w : p.warnings) table.warnings.push_back(std::move(w));
    }
    return table;
}

ModalityData build_modality(const FeatureTable& table, Modality modality, const ReconcileOptions& options) {
    ModalityData data;
    try {
        data.instances = reconcile_instances(table.subjects, modality, options);
    } catch (const ValidationError&) {
        data.instances.clear();
    }

    using Key = std::pair<std::string, int>;
    std::map<Key, const AudioFeatureRow*> audio;
    std::map<Key, const VideoFeatureRow*> video;
    for (const auto& r : table.audio_rows) audio[{r.subject_id, r.repetition}] = &r.features;
    for (const auto& r : table.video_rows) video[{r.subject_id, r.repetition}] = &r.features;

    std::set<Key> modeled;
    for (const auto& inst : data.instances) modeled.insert({inst.subject_id, inst.repetition});

    const bool drop_template = modality != Modality::Video || options.exclude_template_in_video;
    for (const auto& subject : table.subjects) {
        std::set<int> reps;
        for (const auto& [key, row] : audio) {
            if (key.first == subject.subject_id && modality != Modality::Video) reps.insert(key.second);
        }
        for (const auto& [key, row] : video) {
            if (key.first == subject.subject_id && modality != Modality::Audio) reps.insert(key.second);
        }
        for (int rep : reps) {
            ++data.candidates;
            const Key key{subject.subject_id, rep};
            if (modeled.count(key)) continue;
            std::string reason;
            if (drop_template && rep == kTemplateRepetition) {
                reason = "template repetition (DTW reference)";
            } else {
                std::vector<std::string> parts;
                if (modality != Modality::Video) {
                    auto it = audio.find(key);
                    if (it == audio.end()) parts.push_back("no audio for this repetition");
                    else if (!it->second->complete()) parts.push_back("audio: " + join_reasons(*it->second));
                }
                if (modality != Modality::Audio) {
                    auto it = video.find(key);
                    if (it == video.end()) parts.push_back("no video for this repetition");
                    else if (!it->second->complete()) parts.push_back("video: " + join_reasons(*it->second));
                }
                for (const auto& p : parts) reason += (reason.empty() ? "" : " | ") + p;
                if (reason.empty()) reason = "not reconciled";
            }
            data.exclusions.push_back(Exclusion{subject.subject_id, rep, modality, std::move(reason)});
        }
    }
    return data;
}

}  // namespace bulbar::report
