#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bulbar {

/// Mono waveform; samples are dimensionless in [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 0;

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
    std::size_t size() const { return samples.size(); }
    double rate() const { return sample_rate; }

    /// Throws ValidationError when the invariants do not hold.
    void validate() const;
};

inline constexpr std::size_t kLandmarkCount = 68;

using Point3 = std::array<double, 3>;
using LandmarkFrame = std::array<Point3, kLandmarkCount>;

/// Per-frame 68-point facial landmarks (x, y, z in image units).
struct LandmarkTrack {
    std::vector<LandmarkFrame> frames;
    double frame_rate = 0.0;

    double duration_s() const {
        return frame_rate > 0 ? static_cast<double>(frames.size()) / frame_rate : 0.0;
    }
    std::size_t size() const { return frames.size(); }
    double rate() const { return frame_rate; }

    void validate() const;
};

struct RepetitionSpan {
    int index = 0;  // 1-based
    double onset_s = 0.0;
    double offset_s = 0.0;

    double duration_s() const { return offset_s - onset_s; }
    friend bool operator==(const RepetitionSpan&, const RepetitionSpan&) = default;
};

enum class Group { ALS, HC };

std::string_view to_string(Group g);
/// Accepts "ALS" or "HC"; throws ValidationError otherwise.
Group parse_group(std::string_view s);

inline constexpr int kRaters = 2;
inline constexpr int kSubScores = 5;
using RaterScores = std::array<std::array<int, kSubScores>, kRaters>;

struct SubjectRecord {
    std::string subject_id;
    Group group = Group::HC;
    RaterScores rater_scores{};

    /// Mean of the two raters' totals, in [5, 25].
    double target() const;
    void validate() const;

    friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;
};

}  // namespace bulbar
