#include "bulbar/audio/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

constexpr double kOctaveTolerance = 0.9;

struct Peak {
    double lag;
    double value;
};

/// Vertex of the parabola through (-1, a), (0, b), (1, c).
Peak parabolic_peak(std::size_t centre, double a, double b, double c) {
    const double denom = a - 2.0 * b + c;
    if (denom >= 0.0) return {static_cast<double>(centre), b};
    const double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    return {static_cast<double>(centre) + delta, b - 0.25 * (a - c) * delta};
}

}  // namespace

std::size_t PitchTrack::voiced_count() const {
    return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
}

std::vector<double> PitchTrack::voiced_f0() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < f0.size(); ++i) {
        if (voiced[i]) out.push_back(f0[i]);
    }
    return out;
}

double normalized_autocorrelation(std::span<const double> frame, std::size_t lag) {
    if (lag >= frame.size()) return 0.0;
    const std::size_t overlap = frame.size() - lag;
    double cross = 0.0, e0 = 0.0, e1 = 0.0;
    for (std::size_t n = 0; n < overlap; ++n) {
        cross += frame[n] * frame[n + lag];
        e0 += frame[n] * frame[n];
        e1 += frame[n + lag] * frame[n + lag];
    }
    const double denom = std::sqrt(e0 * e1);
    return denom > 0.0 ? cross / denom : 0.0;
}

double normalized_autocorrelation(std::span<const double> frame, double lag) {
    if (lag < 0.0) return 0.0;
    const auto lo = static_cast<std::size_t>(std::floor(lag));
    const double frac = lag - static_cast<double>(lo);
    const double r0 = normalized_autocorrelation(frame, lo);
    if (frac == 0.0) return r0;
    return (1.0 - frac) * r0 + frac * normalized_autocorrelation(frame, lo + 1);
}

std::vector<double> analysis_frame(const AudioClip& clip, double centre_s, std::size_t length) {
    const double start_f = centre_s * clip.sample_rate - static_cast<double>(length) / 2.0;
    const auto start = static_cast<long long>(std::llround(start_f));
    if (start < 0 || static_cast<std::size_t>(start) + length > clip.samples.size()) return {};
    std::vector<double> frame(clip.samples.begin() + start,
                              clip.samples.begin() + start + static_cast<long long>(length));
    const double mean = std::accumulate(frame.begin(), frame.end(), 0.0) / static_cast<double>(length);
    for (double& v : frame) v -= mean;
    return frame;
}

PitchTrack estimate_pitch(const AudioClip& clip, const PitchConfig& cfg) {
    if (!(cfg.f0_floor > 0.0) || !(cfg.f0_floor < cfg.f0_ceiling)) {
        throw ValidationError(fmt::format("pitch band [{}, {}] Hz is invalid", cfg.f0_floor, cfg.f0_ceiling));
    }
    if (cfg.window_s < 2.0 / cfg.f0_floor - 1e-12) {
        throw ValidationError(fmt::format("pitch window {} s must cover two periods of the {} Hz floor",
                                          cfg.window_s, cfg.f0_floor));
    }
    if (!(cfg.hop_s > 0.0)) throw ValidationError("pitch hop must be positive");

    const double rate = clip.sample_rate;
    const auto window = static_cast<std::size_t>(std::lround(cfg.window_s * rate));
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.hop_s * rate)));
    const auto min_lag = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(rate / cfg.f0_ceiling)));
    const auto max_lag = std::min<std::size_t>(window - 2, static_cast<std::size_t>(std::ceil(rate / cfg.f0_floor)));

    PitchTrack track;
    track.window_s = static_cast<double>(window) / rate;
    track.hop_s = static_cast<double>(hop) / rate;

    std::vector<double> frame(window);
    std::vector<double> r(max_lag + 2, 0.0);
    for (std::size_t start = 0; start + window <= clip.samples.size(); start += hop) {
        std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(start), window, frame.begin());
        const double mean = std::accumulate(frame.begin(), frame.end(), 0.0) / static_cast<double>(window);
        for (double& v : frame) v -= mean;

        for (std::size_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
            r[lag] = normalized_autocorrelation(frame, lag);
        }

        std::vector<Peak> peaks;
        for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
            if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1]) {
                peaks.push_back(parabolic_peak(lag, r[lag - 1], r[lag], r[lag + 1]));
            }
        }

        double f0 = 0.0, strength = 0.0;
        bool voiced = false;
        if (!peaks.empty()) {
            const double best = std::max_element(peaks.begin(), peaks.end(), [](auto& a, auto& b) {
                                    return a.value < b.value;
                                })->value;
            const auto chosen = std::find_if(peaks.begin(), peaks.end(), [&](const Peak& p) {
                return p.value >= kOctaveTolerance * best;
            });
            strength = chosen->value;
            const double candidate = rate / chosen->lag;
            if (strength >= cfg.voicing_threshold && candidate >= cfg.f0_floor &&
                candidate <= cfg.f0_ceiling) {
                voiced = true;
                f0 = candidate;
            }
        }
        track.frame_times.push_back((static_cast<double>(start) + static_cast<double>(window) / 2.0) / rate);
        track.f0.push_back(f0);
        track.voiced.push_back(voiced);
        track.strength.push_back(strength);
    }
    return track;
}

}  // namespace bulbar::audio
