#include "bulbar/audio/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

constexpr double kSearchFraction = 0.3;
// Marks weaker than this fraction of the region's median amplitude are
// treated as onset/offset noise and break the cycle sequence.
constexpr double kMinRelativeAmplitude = 0.3;

struct Mark {
    double position;  // samples
    double amplitude;
};

struct Region {
    std::size_t first_frame, last_frame;
};

std::vector<Region> voiced_regions(const PitchTrack& pitch) {
    std::vector<Region> regions;
    std::size_t i = 0;
    while (i < pitch.size()) {
        if (!pitch.voiced[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < pitch.size() && pitch.voiced[j + 1]) ++j;
        regions.push_back({i, j});
        i = j + 1;
    }
    return regions;
}

Mark refine(const std::vector<double>& x, std::size_t k) {
    const double y1 = std::abs(x[k]);
    if (k == 0 || k + 1 >= x.size()) return {static_cast<double>(k), y1};
    const double y0 = std::abs(x[k - 1]);
    const double y2 = std::abs(x[k + 1]);
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom >= 0.0) return {static_cast<double>(k), y1};
    const double delta = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    return {static_cast<double>(k) + delta, y1 - 0.25 * (y0 - y2) * delta};
}

std::size_t argmax_abs(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t k = lo; k < hi; ++k) {
        if (std::abs(x[k]) > std::abs(x[best])) best = k;
    }
    return best;
}

}  // namespace

PeriodSequence extract_periods(const AudioClip& clip, const PitchTrack& pitch) {
    const auto regions = voiced_regions(pitch);
    if (regions.empty()) throw MissingFeatureError("no voiced region for cycle analysis");

    const double rate = clip.sample_rate;
    const auto& x = clip.samples;
    const double half_window = pitch.window_s * rate / 2.0;
    PeriodSequence ps;

    for (const auto& region : regions) {
        const double lo_f = pitch.frame_times[region.first_frame] * rate - half_window;
        const double hi_f = pitch.frame_times[region.last_frame] * rate + half_window;
        const auto lo = static_cast<std::size_t>(std::max(0.0, std::round(lo_f)));
        const auto hi = std::min(x.size(), static_cast<std::size_t>(std::round(hi_f)));

        auto period_at = [&](double position) {
            const double t = position / rate;
            std::size_t best = region.first_frame;
            for (std::size_t f = region.first_frame; f <= region.last_frame; ++f) {
                if (std::abs(pitch.frame_times[f] - t) < std::abs(pitch.frame_times[best] - t)) best = f;
            }
            return rate / pitch.f0[best];
        };

        const double first_period = period_at(static_cast<double>(lo));
        const auto first_hi = std::min(hi, lo + static_cast<std::size_t>(std::ceil(first_period)));
        if (first_hi <= lo) continue;

        std::vector<Mark> marks{refine(x, argmax_abs(x, lo, first_hi))};
        while (true) {
            const double period = period_at(marks.back().position);
            const double predicted = marks.back().position + period;
            const double reach = kSearchFraction * period;
            if (predicted + reach >= static_cast<double>(hi)) break;
            const auto s_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(predicted - reach)));
            const auto s_hi = static_cast<std::size_t>(std::floor(predicted + reach)) + 1;
            marks.push_back(refine(x, argmax_abs(x, s_lo, s_hi)));
        }
        std::vector<double> amps;
        for (const auto& m : marks) amps.push_back(m.amplitude);
        std::nth_element(amps.begin(), amps.begin() + static_cast<std::ptrdiff_t>(amps.size() / 2), amps.end());
        const double floor_amp = kMinRelativeAmplitude * amps[amps.size() / 2];
        for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
            if (marks[i].amplitude < floor_amp || marks[i + 1].amplitude < floor_amp) continue;
            ps.periods.push_back((marks[i + 1].position - marks[i].position) / rate);
            ps.peak_amplitudes.push_back(marks[i].amplitude);
        }
    }
    if (ps.periods.empty()) throw MissingFeatureError("voiced regions too short for a full cycle");
    return ps;
}

F0Stats f0_stats(const PitchTrack& pitch) {
    std::vector<double> v = pitch.voiced_f0();
    if (v.empty()) throw MissingFeatureError("no voiced frames for F0 statistics");
    std::sort(v.begin(), v.end());
    const auto n = static_cast<double>(v.size());
    F0Stats s{};
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double f : v) ss += (f - s.mean) * (f - s.mean);
    s.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const std::size_t mid = v.size() / 2;
    s.median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    s.min = v.front();
    s.max = v.back();
    s.range = s.max - s.min;
    return s;
}

Perturbation perturbation(std::span<const double> t) {
    const std::size_t n = t.size();
    if (n < 2) throw MissingFeatureError("fewer than two cycles for perturbation analysis");
    const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(n);
    if (!(mean > 0.0)) throw MissingFeatureError("non-positive mean in perturbation analysis");

    Perturbation p;
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += std::abs(t[i] - t[i - 1]);
    p.local = acc / static_cast<double>(n - 1) / mean;

    auto moving = [&](std::size_t half) -> std::optional<double> {
        const std::size_t width = 2 * half + 1;
        if (n < width) return std::nullopt;
        double sum = 0.0;
        for (std::size_t i = half; i + half < n; ++i) {
            double avg = 0.0;
            for (std::size_t k = i - half; k <= i + half; ++k) avg += t[k];
            avg /= static_cast<double>(width);
            sum += std::abs(t[i] - avg);
        }
        return sum / static_cast<double>(n - 2 * half) / mean;
    };
    p.three_point = moving(1);
    p.five_point = moving(2);
    return p;
}

double hnr_from_correlation(double r) {
    r = std::clamp(r, 1e-6, 1.0 - 1e-6);
    return 10.0 * std::log10(r / (1.0 - r));
}

double hnr_mean(const AudioClip& clip, const PitchTrack& pitch) {
    const auto window = static_cast<std::size_t>(std::lround(pitch.window_s * clip.sample_rate));
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t f = 0; f < pitch.size(); ++f) {
        if (!pitch.voiced[f]) continue;
        const auto frame = analysis_frame(clip, pitch.frame_times[f], window);
        if (frame.empty()) continue;
        const double lag = clip.sample_rate / pitch.f0[f];
        sum += hnr_from_correlation(normalized_autocorrelation(frame, lag));
        ++count;
    }
    if (count == 0) throw MissingFeatureError("no voiced frames for HNR");
    return sum / static_cast<double>(count);
}

}  // namespace bulbar::audio
