#include "bulbar/core/types.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar {

void AudioClip::validate() const {
    if (sample_rate <= 0) {
        throw ValidationError(fmt::format("sample rate must be positive, got {}", sample_rate));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double s = samples[i];
        if (!std::isfinite(s) || std::abs(s) > 1.0) {
            throw ValidationError(fmt::format("sample {} out of range: {}", i, s));
        }
    }
}

void LandmarkTrack::validate() const {
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
        throw ValidationError(fmt::format("frame rate must be positive, got {}", frame_rate));
    }
    for (std::size_t f = 0; f < frames.size(); ++f) {
        for (std::size_t p = 0; p < kLandmarkCount; ++p) {
            for (double c : frames[f][p]) {
                if (!std::isfinite(c)) {
                    throw ValidationError(
                        fmt::format("non-finite coordinate at frame {}, landmark {}", f, p));
                }
            }
        }
    }
}

std::string_view to_string(Group g) { return g == Group::ALS ? "ALS" : "HC"; }

Group parse_group(std::string_view s) {
    if (s == "ALS") return Group::ALS;
    if (s == "HC") return Group::HC;
    throw ValidationError(fmt::format("unknown group '{}' (expected ALS or HC)", s));
}

double SubjectRecord::target() const {
    int total = 0;
    for (const auto& rater : rater_scores) {
        for (int s : rater) total += s;
    }
    return total / 2.0;
}

void SubjectRecord::validate() const {
    if (subject_id.empty()) throw ValidationError("subject id must not be empty");
    for (int r = 0; r < kRaters; ++r) {
        for (int k = 0; k < kSubScores; ++k) {
            const int s = rater_scores[r][k];
            if (s < 1 || s > 5) {
                throw ValidationError(fmt::format(
                    "subject '{}': rater {} sub-score {} is {} (must be in [1,5])", subject_id,
                    r + 1, k + 1, s));
            }
        }
    }
}

}  // namespace bulbar
