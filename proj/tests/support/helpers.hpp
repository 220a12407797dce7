#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& name) {
        path_ = std::filesystem::temp_directory_path() / "bulbar_tests" / name;
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline AudioClip sine(double freq, double amplitude, double duration_s, int sample_rate = 16000,
                      double phase = 0.0) {
    AudioClip clip;
    clip.sample_rate = sample_rate;
    const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
    clip.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        clip.samples[k] = amplitude * std::sin(2.0 * std::numbers::pi * freq * k / sample_rate + phase);
    }
    return clip;
}

inline AudioClip silence(double duration_s, int sample_rate = 16000) {
    AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.samples.assign(static_cast<std::size_t>(std::lround(duration_s * sample_rate)), 0.0);
    return clip;
}

inline AudioClip white_noise(double sd, double duration_s, std::uint64_t seed, int sample_rate = 16000) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sd);
    AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.samples.resize(static_cast<std::size_t>(std::lround(duration_s * sample_rate)));
    for (auto& s : clip.samples) s = std::clamp(dist(rng), -1.0, 1.0);
    return clip;
}

inline void append(AudioClip& dst, const AudioClip& src) {
    dst.samples.insert(dst.samples.end(), src.samples.begin(), src.samples.end());
}

/// Unit pulses every `period` samples, optionally alternating in height.
inline AudioClip pulse_train(double f0, double duration_s, double a = 1.0, double b = 1.0,
                             int sample_rate = 16000) {
    AudioClip clip = silence(duration_s, sample_rate);
    const double period = sample_rate / f0;
    int i = 0;
    for (double t = period / 2; t < static_cast<double>(clip.samples.size()); t += period, ++i) {
        clip.samples[static_cast<std::size_t>(std::lround(t))] = (i % 2 == 0) ? a : b;
    }
    return clip;
}

/// A face in image units: inner eye corners at (-0.5, 0) and (0.5, 0),
/// elliptical outer lip contour of the given width and height centred at
/// (0, mouth_y), chin at (0, jaw_y). Other points sit on a wide circle.
inline LandmarkFrame face_frame(double width, double height, double mouth_y = 1.5, double jaw_y = 2.5,
                                double corner_shift_right = 0.0, double corner_shift_left = 0.0) {
    LandmarkFrame f{};
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / kLandmarkCount;
        f[i] = {3.0 * std::cos(th), 3.0 * std::sin(th), 0.0};
    }
    f[39] = {-0.5, 0.0, 0.0};
    f[42] = {0.5, 0.0, 0.0};
    for (int i = 0; i < 12; ++i) {
        const double th = std::numbers::pi + i * std::numbers::pi / 6.0;
        f[48 + i] = {width / 2 * std::cos(th), mouth_y + height / 2 * std::sin(th), 0.0};
    }
    f[48][0] -= corner_shift_right;
    f[54][0] += corner_shift_left;
    f[8] = {0.0, jaw_y, 0.0};
    return f;
}

/// Rotation by theta, uniform scale, then translation, in the x-y plane.
inline LandmarkFrame similarity(const LandmarkFrame& f, double theta, double scale, double tx, double ty) {
    LandmarkFrame out = f;
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const double x = f[i][0], y = f[i][1];
        out[i] = {scale * (c * x - s * y) + tx, scale * (s * x + c * y) + ty, scale * f[i][2]};
    }
    return out;
}

}  // namespace bulbar::testing
