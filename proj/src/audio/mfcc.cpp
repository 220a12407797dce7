#include "bulbar/audio/mfcc.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::audio {

namespace {

constexpr double kLogFloor = 1e-12;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// Real-input FFT of a fixed size. Planning is serialized (FFTW planners
/// are not thread-safe); execution on private buffers is.
class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n) {
        std::lock_guard lock(planner_mutex());
        in_ = fftw_alloc_real(n_);
        out_ = fftw_alloc_complex(n_ / 2 + 1);
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    double* input() { return in_; }

    /// Magnitudes of bins 0..n/2.
    void magnitudes(std::vector<double>& out) {
        fftw_execute(plan_);
        out.resize(n_ / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::hypot(out_[k][0], out_[k][1]);
    }

private:
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// n_mels x (fft_size/2 + 1) triangular weights.
Eigen::MatrixXd mel_filterbank(int n_mels, std::size_t fft_size, double rate) {
    const std::size_t bins = fft_size / 2 + 1;
    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, static_cast<Eigen::Index>(bins));
    const double mel_max = hz_to_mel(rate / 2.0);
    std::vector<double> edges(n_mels + 2);
    for (int i = 0; i < n_mels + 2; ++i) edges[i] = mel_to_hz(mel_max * i / (n_mels + 1));
    for (int m = 0; m < n_mels; ++m) {
        const double lo = edges[m], centre = edges[m + 1], hi = edges[m + 2];
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * rate / static_cast<double>(fft_size);
            double w = 0.0;
            if (f > lo && f <= centre) w = (f - lo) / (centre - lo);
            else if (f > centre && f < hi) w = (hi - f) / (hi - centre);
            fb(m, static_cast<Eigen::Index>(k)) = w;
        }
    }
    return fb;
}

/// Orthonormal DCT-II, first n_coeffs rows.
Eigen::MatrixXd dct_matrix(int n_coeffs, int n_mels) {
    Eigen::MatrixXd d(n_coeffs, n_mels);
    for (int k = 0; k < n_coeffs; ++k) {
        const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n_mels);
        for (int m = 0; m < n_mels; ++m) {
            d(k, m) = scale * std::cos(std::numbers::pi * k * (m + 0.5) / n_mels);
        }
    }
    return d;
}

}  // namespace

FeatureMatrix mfcc(const AudioClip& clip, const MfccConfig& cfg) {
    if (cfg.n_mels < 1 || cfg.n_coeffs < 1 || cfg.n_coeffs > cfg.n_mels) {
        throw ValidationError(fmt::format("invalid MFCC shape: {} mels, {} coefficients", cfg.n_mels,
                                          cfg.n_coeffs));
    }
    const auto window = static_cast<std::size_t>(std::lround(cfg.window_s * clip.sample_rate));
    const auto hop = static_cast<std::size_t>(std::lround(cfg.hop_s * clip.sample_rate));
    if (window < 2 || hop < 1) throw ValidationError("MFCC framing shorter than one sample");
    const std::size_t n = clip.samples.size();
    if (n < window) {
        throw ValidationError(
            fmt::format("clip of {} samples is shorter than the {}-sample MFCC window", n, window));
    }
    const std::size_t frames = (n - window) / hop + 1;
    const std::size_t fft_size = next_pow2(window);

    std::vector<double> hann(window);
    for (std::size_t i = 0; i < window; ++i) {
        hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                       static_cast<double>(window - 1));
    }
    const Eigen::MatrixXd fb = mel_filterbank(cfg.n_mels, fft_size, clip.sample_rate);
    const Eigen::MatrixXd dct = dct_matrix(cfg.n_coeffs, cfg.n_mels);

    RealFft fft(fft_size);
    std::vector<double> mag;
    Eigen::VectorXd log_mel(cfg.n_mels);
    FeatureMatrix out(static_cast<Eigen::Index>(frames), cfg.n_coeffs);
    for (std::size_t f = 0; f < frames; ++f) {
        double* in = fft.input();
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < window; ++i) in[i] = clip.samples[start + i] * hann[i];
        for (std::size_t i = window; i < fft_size; ++i) in[i] = 0.0;
        fft.magnitudes(mag);
        const Eigen::Map<const Eigen::VectorXd> spectrum(mag.data(), static_cast<Eigen::Index>(mag.size()));
        const Eigen::VectorXd energies = fb * spectrum;
        for (int m = 0; m < cfg.n_mels; ++m) log_mel(m) = std::log(std::max(energies(m), kLogFloor));
        out.row(static_cast<Eigen::Index>(f)) = (dct * log_mel).transpose();
    }
    return out;
}

}  // namespace bulbar::audio
