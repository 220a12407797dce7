#include "bulbar/core/instances.hpp"

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::Audio: return "audio";
        case Modality::Video: return "video";
        case Modality::Multimodal: return "multimodal";
    }
    return "?";
}

Modality parse_modality(std::string_view s) {
    if (s == "audio") return Modality::Audio;
    if (s == "video") return Modality::Video;
    if (s == "multimodal") return Modality::Multimodal;
    throw ValidationError(fmt::format("unknown modality '{}'", s));
}

std::size_t feature_count(Modality m) {
    switch (m) {
        case Modality::Audio: return kAudioFeatureCount;
        case Modality::Video: return kVideoFeatureCount;
        case Modality::Multimodal: return kAudioFeatureCount + kVideoFeatureCount;
    }
    return 0;
}

std::vector<std::string> feature_names(Modality m) {
    std::vector<std::string> names;
    if (m != Modality::Video) {
        for (auto n : kAudioFeatureNames) names.emplace_back(n);
    }
    if (m != Modality::Audio) {
        for (auto n : kVideoFeatureNames) names.emplace_back(n);
    }
    return names;
}

std::vector<double> Instance::features(Modality m) const {
    std::vector<double> out;
    out.reserve(feature_count(m));
    if (m != Modality::Video) {
        if (!audio) throw ValidationError(fmt::format("{} rep {}: no audio features", subject_id, repetition));
        out.insert(out.end(), audio->begin(), audio->end());
    }
    if (m != Modality::Audio) {
        if (!video) throw ValidationError(fmt::format("{} rep {}: no video features", subject_id, repetition));
        out.insert(out.end(), video->begin(), video->end());
    }
    return out;
}

std::vector<Instance> reconcile_instances(const std::vector<SubjectFeatures>& subjects,
                                          Modality modality, const ReconcileOptions& options) {
    const bool drop_template = modality != Modality::Video || options.exclude_template_in_video;
    std::vector<Instance> out;
    for (const auto& s : subjects) {
        auto make = [&](int rep) {
            Instance inst;
            inst.subject_id = s.subject_id;
            inst.group = s.group;
            inst.repetition = rep;
            inst.target = s.target;
            return inst;
        };
        switch (modality) {
            case Modality::Audio:
                for (const auto& [rep, f] : s.audio) {
                    if (drop_template && rep == kTemplateRepetition) continue;
                    auto inst = make(rep);
                    inst.audio = f;
                    out.push_back(std::move(inst));
                }
                break;
            case Modality::Video:
                for (const auto& [rep, f] : s.video) {
                    if (drop_template && rep == kTemplateRepetition) continue;
                    auto inst = make(rep);
                    inst.video = f;
                    out.push_back(std::move(inst));
                }
                break;
            case Modality::Multimodal:
                for (const auto& [rep, f] : s.audio) {
                    if (drop_template && rep == kTemplateRepetition) continue;
                    auto it = s.video.find(rep);
                    if (it == s.video.end()) continue;
                    auto inst = make(rep);
                    inst.audio = f;
                    inst.video = it->second;
                    out.push_back(std::move(inst));
                }
                break;
        }
    }
    if (out.empty()) {
        throw ValidationError(
            fmt::format("no {} instances remain after reconciliation (empty dataset)", to_string(modality)));
    }
    return out;
}

}  // namespace bulbar
