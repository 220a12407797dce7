#pragma once

#include <cstddef>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar {

/// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

/// Smallest k such that k / rate >= t.
std::size_t first_index_at_or_after(double t, double rate);

/// Indices k with onset_s <= k / rate < offset_s. Throws RangeError when
/// the span ends beyond `count / rate`.
IndexRange span_indices(const RepetitionSpan& span, double rate, std::size_t count);

/// One segment per span. Throws ValidationError for overlapping or
/// malformed spans, RangeError for spans past the end of the signal.
std::vector<AudioClip> slice_spans(const AudioClip& clip, const std::vector<RepetitionSpan>& spans);
std::vector<LandmarkTrack> slice_spans(const LandmarkTrack& track,
                                       const std::vector<RepetitionSpan>& spans);

}  // namespace bulbar
