#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bulbar/core/manifest.hpp"
#include "bulbar/core/types.hpp"

namespace bulbar::report {

/// Sustained pulse-train voice. Period i is T0 * (1 + (-1)^i * jitter/2 * a_i)
/// and amplitude i is A0 * (1 + (-1)^i * shimmer/2 * b_i) with a_i, b_i
/// uniform in [0.8, 1.2], so the local jitter and shimmer of the result
/// are close to the requested values.
struct VoiceParams {
    double f0 = 120.0;
    double jitter = 0.0;
    double shimmer = 0.0;
    double amplitude = 0.5;
    double duration_s = 1.0;
    /// Additive white noise relative to the voiced signal power; none if empty.
    std::optional<double> hnr_db;
    /// Gaussian pulse width.
    double pulse_sigma_s = 0.0005;
};

std::vector<double> synth_voice(const VoiceParams& params, int sample_rate, std::mt19937_64& rng);

struct SynthParams {
    int n_subjects = 20;
    int reps_per_subject = 10;
    double als_fraction = 0.5;
    int sample_rate = 16000;
    double frame_rate = 30.0;
    double f0_min = 100.0;
    double f0_max = 220.0;
    double jitter_min = 0.005;
    double jitter_max = 0.05;
    double shimmer_min = 0.005;
    double shimmer_max = 0.05;
    double hnr_min_db = 60.0;
    double hnr_max_db = 70.0;
    /// Peak mouth opening in intercanthal units; higher latent z3 gives
    /// smaller openings.
    double opening_min = 0.2;
    double opening_max = 0.6;
    double target_noise_sd = 0.3;
    /// Per-word substitution probability at latent severity 1.
    double max_word_error = 0.3;
    std::uint64_t seed = 0;
};

/// Validates ranges; throws ValidationError.
void validate(const SynthParams& params);

struct SynthSubjectTruth {
    std::string subject_id;
    Group group = Group::HC;
    /// Latent severities in [0, 1]: voice periodicity, amplitude stability, articulation.
    std::array<double, 3> z{};
    double f0 = 0.0;
    double jitter = 0.0;
    double shimmer = 0.0;
    double hnr_db = 0.0;
    double opening = 0.0;
    double latent_target = 0.0;
    double target = 0.0;
};

struct SynthResult {
    DatasetManifest manifest;
    std::vector<SynthSubjectTruth> truth;
};

/// Target before quantization: 5 + 20 * (0.4 z1 + 0.3 z2 + 0.3 z3) + noise.
double latent_target(const std::array<double, 3>& z, double noise);

/// Ten rater sub-scores in [1, 5] whose total is round(2 * target) clamped
/// to [10, 50], so the recorded target is a multiple of 0.5.
RaterScores quantize_scores(double target);

/// Writes manifest.json, truth.csv, and per subject audio.wav,
/// landmarks.csv, annotations.csv, transcript.txt under out_dir. The same
/// parameters always produce byte-identical files.
SynthResult synth_cohort(const SynthParams& params, const std::filesystem::path& out_dir);

}  // namespace bulbar::report
