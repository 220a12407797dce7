#include "bulbar/core/slicing.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bulbar/core/annotations.hpp"
#include "bulbar/error.hpp"

namespace bulbar {

std::size_t first_index_at_or_after(double t, double rate) {
    if (t <= 0.0) return 0;
    auto k = static_cast<std::size_t>(std::ceil(t * rate));
    // t * rate may round either way; settle on the exact k / rate comparison.
    while (k > 0 && static_cast<double>(k - 1) / rate >= t) --k;
    while (static_cast<double>(k) / rate < t) ++k;
    return k;
}

IndexRange span_indices(const RepetitionSpan& span, double rate, std::size_t count) {
    const double duration = static_cast<double>(count) / rate;
    if (span.offset_s > duration + 1e-9) {
        throw RangeError(fmt::format("repetition {}: offset {} s beyond signal duration {} s",
                                     span.index, span.offset_s, duration));
    }
    IndexRange r{first_index_at_or_after(span.onset_s, rate),
                 first_index_at_or_after(span.offset_s, rate)};
    if (r.end > count) r.end = count;
    if (r.begin > r.end) r.begin = r.end;
    return r;
}

namespace {

template <typename Signal, typename Copy>
std::vector<Signal> slice_impl(const Signal& signal, const std::vector<RepetitionSpan>& spans,
                               Copy copy) {
    validate_spans(spans);
    std::vector<Signal> out;
    out.reserve(spans.size());
    for (const auto& span : spans) {
        const IndexRange r = span_indices(span, signal.rate(), signal.size());
        out.push_back(copy(r));
    }
    return out;
}

}  // namespace

std::vector<AudioClip> slice_spans(const AudioClip& clip, const std::vector<RepetitionSpan>& spans) {
    return slice_impl(clip, spans, [&](IndexRange r) {
        AudioClip seg;
        seg.sample_rate = clip.sample_rate;
        seg.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(r.begin),
                           clip.samples.begin() + static_cast<std::ptrdiff_t>(r.end));
        return seg;
    });
}

std::vector<LandmarkTrack> slice_spans(const LandmarkTrack& track,
                                       const std::vector<RepetitionSpan>& spans) {
    return slice_impl(track, spans, [&](IndexRange r) {
        LandmarkTrack seg;
        seg.frame_rate = track.frame_rate;
        seg.frames.assign(track.frames.begin() + static_cast<std::ptrdiff_t>(r.begin),
                          track.frames.begin() + static_cast<std::ptrdiff_t>(r.end));
        return seg;
    });
}

}  // namespace bulbar
