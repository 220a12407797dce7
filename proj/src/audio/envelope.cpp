#include "bulbar/audio/envelope.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

struct Framing {
    std::size_t window;
    std::size_t hop;
};

Framing make_framing(double window_s, double hop_s, int rate) {
    if (!(hop_s > 0.0) || hop_s > window_s) {
        throw ValidationError(fmt::format("invalid framing: window {} s, hop {} s", window_s, hop_s));
    }
    const auto window = static_cast<std::size_t>(std::lround(window_s * rate));
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop_s * rate)));
    if (window == 0) throw ValidationError("analysis window shorter than one sample");
    return {window, std::min(hop, window)};
}

double to_linear(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace

double Envelope::peak() const {
    double p = 0.0;
    for (const auto& f : frames) p = std::max(p, f.rms);
    return p;
}

Envelope rms_envelope(const AudioClip& clip, double window_s, double hop_s) {
    const Framing fr = make_framing(window_s, hop_s, clip.sample_rate);
    const std::size_t n = clip.samples.size();
    if (n < fr.window) {
        throw ValidationError(fmt::format("clip of {} samples is shorter than one {}-sample window",
                                          n, fr.window));
    }
    Envelope env;
    env.window_s = static_cast<double>(fr.window) / clip.sample_rate;
    env.hop_s = static_cast<double>(fr.hop) / clip.sample_rate;
    for (std::size_t start = 0; start + fr.window <= n; start += fr.hop) {
        double acc = 0.0;
        for (std::size_t i = start; i < start + fr.window; ++i) acc += clip.samples[i] * clip.samples[i];
        env.frames.push_back({static_cast<double>(start) / clip.sample_rate,
                              std::sqrt(acc / static_cast<double>(fr.window))});
    }
    return env;
}

std::vector<RepetitionSpan> suggest_spans(const Envelope& envelope, const SpanSuggestionConfig& cfg) {
    const double peak = envelope.peak();
    if (envelope.frames.empty() || peak <= 0.0) return {};
    const double threshold = peak * to_linear(cfg.rel_threshold_db);

    // A window turns active as soon as it overlaps the burst, so an onset
    // lies within the last hop of the first active window and an offset
    // within the first hop of the last active window.
    const double half_hop = envelope.hop_s / 2.0;
    const double end_time = envelope.frames.back().time_s + envelope.window_s;

    struct Run {
        double onset, offset;
    };
    std::vector<Run> runs;
    std::size_t i = 0;
    const std::size_t n = envelope.frames.size();
    while (i < n) {
        if (envelope.frames[i].rms <= threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && envelope.frames[j + 1].rms > threshold) ++j;
        double onset = envelope.frames[i].time_s + envelope.window_s - half_hop;
        double offset = envelope.frames[j].time_s + half_hop;
        if (offset <= onset) {
            const double centre = 0.5 * (envelope.frames[i].time_s + envelope.frames[j].time_s + envelope.window_s);
            onset = centre - half_hop;
            offset = centre + half_hop;
        }
        if (i == 0) onset = 0.0;
        if (j + 1 == n) offset = end_time;
        onset = std::max(0.0, onset);
        offset = std::min(end_time, offset);
        if (!runs.empty() && onset - runs.back().offset < cfg.min_gap_s) {
            runs.back().offset = offset;
        } else {
            runs.push_back({onset, offset});
        }
        i = j + 1;
    }

    std::vector<RepetitionSpan> spans;
    for (const auto& r : runs) {
        if (r.offset - r.onset >= cfg.min_speech_s) {
            spans.push_back({static_cast<int>(spans.size()) + 1, r.onset, r.offset});
        }
    }
    return spans;
}

double detect_pauses(const AudioClip& segment, const PauseConfig& cfg) {
    const Framing fr = make_framing(cfg.window_s, cfg.hop_s, segment.sample_rate);
    if (segment.samples.size() < fr.window) return 0.0;
    const Envelope env = rms_envelope(segment, cfg.window_s, cfg.hop_s);
    const double peak = env.peak();
    if (peak <= 0.0) return 0.0;
    const double threshold = peak * to_linear(cfg.rel_threshold_db);

    const auto& frames = env.frames;
    const std::size_t n = frames.size();
    double total = 0.0;
    std::size_t i = 0;
    while (i < n) {
        if (frames[i].rms >= threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && frames[j + 1].rms < threshold) ++j;
        const bool interior = i > 0 && j + 1 < n;
        const double duration = frames[j].time_s - frames[i].time_s + env.window_s;
        if (interior && duration >= cfg.min_pause_s - 1e-12) total += duration;
        i = j + 1;
    }
    return total;
}

}  // namespace bulbar::audio
