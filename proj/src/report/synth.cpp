#include "bulbar/report/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bulbar/core/annotations.hpp"
#include "bulbar/core/fileio.hpp"
#include "bulbar/core/landmarks_io.hpp"
#include "bulbar/core/wav.hpp"
#include "bulbar/error.hpp"
#include "bulbar/eval/parallel.hpp"

namespace bulbar::report {

namespace {

constexpr double kNoiseFloor = 2e-4;  // -68 dB re. pulse amplitude
constexpr double kLandmarkNoisePx = 0.3;

using Vec2 = std::array<double, 2>;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(std::mt19937_64& rng, double sd) {
    return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0;
}

// Resting face in intercanthal units, origin between the inner eye
// corners, y pointing down.
std::array<Vec2, kLandmarkCount> template_face() {
    std::array<Vec2, kLandmarkCount> f{};
    for (int i = 0; i <= 16; ++i) {
        const double a = std::numbers::pi * i / 16.0;
        f[i] = {-1.6 * std::cos(a), 2.6 * std::sin(a)};
    }
    for (int i = 0; i < 5; ++i) {
        f[17 + i] = {-1.5 + 0.25 * i, -0.6};
        f[22 + i] = {0.5 + 0.25 * i, -0.6};
    }
    for (int i = 0; i < 4; ++i) f[27 + i] = {0.0, 0.1 + 0.25 * i};
    for (int i = 0; i < 5; ++i) f[31 + i] = {-0.35 + 0.175 * i, 1.05};
    const std::array<Vec2, 6> eye = {{{-1.5, 0.0}, {-1.15, -0.12}, {-0.85, -0.12}, {-0.5, 0.0}, {-0.85, 0.1}, {-1.15, 0.1}}};
    for (int i = 0; i < 6; ++i) {
        f[36 + i] = eye[i];
        // Mirror image: 42 is the inner corner of the other eye.
        const int m = (9 - i) % 6;
        f[42 + i] = {-eye[m][0], eye[m][1]};
    }
    const std::array<Vec2, 12> outer = {{{-0.7, 1.6}, {-0.45, 1.48}, {-0.2, 1.42}, {0.0, 1.45},
                                         {0.2, 1.42}, {0.45, 1.48}, {0.7, 1.6}, {0.45, 1.72},
                                         {0.2, 1.78}, {0.0, 1.8}, {-0.2, 1.78}, {-0.45, 1.72}}};
    for (int i = 0; i < 12; ++i) f[48 + i] = outer[i];
    const std::array<Vec2, 8> inner = {{{-0.55, 1.6}, {-0.2, 1.53}, {0.0, 1.54}, {0.2, 1.53},
                                        {0.55, 1.6}, {0.2, 1.67}, {0.0, 1.68}, {-0.2, 1.67}}};
    for (int i = 0; i < 8; ++i) f[60 + i] = inner[i];
    return f;
}

// Downward displacement weights per unit of mouth opening.
double drop_weight(int i) {
    switch (i) {
        case 57: return 1.0;
        case 56: case 58: return 0.85;
        case 55: case 59: return 0.5;
        case 65: case 66: case 67: return 0.9;
        case 8: return 0.6;
        case 7: case 9: return 0.54;
        case 6: case 10: return 0.42;
        case 5: case 11: return 0.24;
        case 48: case 54: case 60: case 64: return 0.3;
        case 49: case 50: case 51: case 52: case 53: case 61: case 62: case 63: return -0.1;
        default: return 0.0;
    }
}

const std::vector<std::string> kConfusions = {"by", "bob", "the", "puppet", "bobbie", "pop", "a", "baby"};

std::string synth_transcript(const std::string& reference, double p_error, std::mt19937_64& rng) {
    std::string out, word;
    auto flush = [&] {
        if (word.empty()) return;
        std::string w = word;
        if (uniform(rng, 0.0, 1.0) < p_error) {
            w = kConfusions[static_cast<std::size_t>(uniform(rng, 0.0, 1.0) * kConfusions.size()) % kConfusions.size()];
        }
        out += (out.empty() ? "" : " ") + w;
        word.clear();
    };
    for (char c : reference) {
        if (c == ' ') flush();
        else word += c;
    }
    flush();
    return out;
}

std::string fmt6(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

std::vector<double> synth_voice(const VoiceParams& p, int sample_rate, std::mt19937_64& rng) {
    if (!(p.f0 > 0.0) || !(p.duration_s > 0.0) || sample_rate <= 0) {
        throw ValidationError("synth_voice: f0, duration and sample rate must be positive");
    }
    const double rate = sample_rate;
    const auto n = static_cast<std::size_t>(std::lround(p.duration_s * rate));
    std::vector<double> out(n, 0.0);
    const double sigma = p.pulse_sigma_s * rate;
    const double t0 = rate / p.f0;
    double t = 4.0 * sigma;
    for (int i = 0; t < static_cast<double>(n) - 4.0 * sigma; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const double amp = p.amplitude * (1.0 + sign * p.shimmer / 2.0 * uniform(rng, 0.8, 1.2));
        const auto lo = static_cast<std::ptrdiff_t>(std::floor(t - 5.0 * sigma));
        const auto hi = static_cast<std::ptrdiff_t>(std::ceil(t + 5.0 * sigma));
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(lo, 0); k <= hi && k < static_cast<std::ptrdiff_t>(n); ++k) {
            const double d = (static_cast<double>(k) - t) / sigma;
            out[static_cast<std::size_t>(k)] += amp * std::exp(-0.5 * d * d);
        }
        t += t0 * (1.0 + sign * p.jitter / 2.0 * uniform(rng, 0.8, 1.2));
    }
    if (p.hnr_db) {
        double mean = 0.0;
        for (double v : out) mean += v;
        mean /= static_cast<double>(n);
        double power = 0.0;
        for (double v : out) power += (v - mean) * (v - mean);
        power /= static_cast<double>(n);
        const double sd = std::sqrt(power / std::pow(10.0, *p.hnr_db / 10.0));
        for (double& v : out) v += normal(rng, sd);
    }
    return out;
}

void validate(const SynthParams& p) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(fmt::format("synth: {}", what));
    };
    require(p.n_subjects >= 1 && p.n_subjects <= 999, "n_subjects must be in [1, 999]");
    require(p.reps_per_subject >= 1 && p.reps_per_subject <= 100, "reps_per_subject must be in [1, 100]");
    require(p.als_fraction >= 0.0 && p.als_fraction <= 1.0, "als_fraction must be in [0, 1]");
    require(p.sample_rate >= 8000 && p.sample_rate <= 96000, "sample_rate must be in [8000, 96000]");
    require(p.frame_rate >= 10.0 && p.frame_rate <= 240.0, "frame_rate must be in [10, 240]");
    require(p.f0_min >= 60.0 && p.f0_max <= 400.0 && p.f0_min <= p.f0_max, "f0 range must lie in [60, 400]");
    require(p.jitter_min >= 0.0 && p.jitter_max <= 0.1 && p.jitter_min <= p.jitter_max, "jitter range must lie in [0, 0.1]");
    require(p.shimmer_min >= 0.0 && p.shimmer_max <= 0.2 && p.shimmer_min <= p.shimmer_max,
            "shimmer range must lie in [0, 0.2]");
    require(p.hnr_min_db >= 0.0 && p.hnr_min_db <= p.hnr_max_db, "HNR range must be non-negative and ordered");
    require(p.opening_min > 0.0 && p.opening_min <= p.opening_max && p.opening_max <= 1.0,
            "mouth opening range must lie in (0, 1]");
    require(p.target_noise_sd >= 0.0, "target_noise_sd must be >= 0");
    require(p.max_word_error >= 0.0 && p.max_word_error <= 1.0, "max_word_error must be in [0, 1]");
}

double latent_target(const std::array<double, 3>& z, double noise) {
    return 5.0 + 20.0 * (0.4 * z[0] + 0.3 * z[1] + 0.3 * z[2]) + noise;
}

RaterScores quantize_scores(double target) {
    const int slots = kRaters * kSubScores;
    const long total = std::clamp(std::lround(2.0 * target), static_cast<long>(slots), static_cast<long>(5 * slots));
    const long extra = total - slots;
    RaterScores s{};
    for (int i = 0; i < slots; ++i) {
        const long add = extra / slots + (i < extra % slots ? 1 : 0);
        s[i % kRaters][i / kRaters] = static_cast<int>(1 + add);
    }
    return s;
}

SynthResult synth_cohort(const SynthParams& params, const std::filesystem::path& out_dir) {
    validate(params);
    const auto face = template_face();
    const int n = params.n_subjects;
    const int n_als = static_cast<int>(std::lround(params.als_fraction * n));

    SynthResult result;
    result.manifest.base_dir = out_dir;
    result.truth.resize(static_cast<std::size_t>(n));
    result.manifest.subjects.resize(static_cast<std::size_t>(n));

    // Each subject draws from its own stream, so subjects are independent
    // of generation order.
    eval::parallel_for(static_cast<std::size_t>(n), 0, [&](std::size_t si) {
        std::mt19937_64 rng(eval::task_seed(params.seed, si, 0, 0));
        SynthSubjectTruth truth;
        truth.subject_id = fmt::format("S{:02d}", si + 1);
        truth.group = static_cast<int>(si) < n_als ? Group::ALS : Group::HC;
        for (double& z : truth.z) {
            z = truth.group == Group::ALS ? uniform(rng, 0.3, 1.0) : uniform(rng, 0.0, 0.4);
        }
        truth.f0 = uniform(rng, params.f0_min, params.f0_max);
        truth.jitter = params.jitter_min + (params.jitter_max - params.jitter_min) * truth.z[0];
        truth.shimmer = params.shimmer_min + (params.shimmer_max - params.shimmer_min) * truth.z[1];
        truth.hnr_db = uniform(rng, params.hnr_min_db, params.hnr_max_db);
        truth.opening = params.opening_max - (params.opening_max - params.opening_min) * truth.z[2];
        truth.latent_target = latent_target(truth.z, normal(rng, params.target_noise_sd));
        const RaterScores scores = quantize_scores(truth.latent_target);

        const double slow = 1.0 + 0.3 * truth.z[2];
        const double motion_hz = 4.5 - 1.0 * truth.z[2];
        const double p_error = params.max_word_error * (truth.z[0] + truth.z[1] + truth.z[2]) / 3.0;

        // Timeline: two voiced chunks with an interior pause per repetition.
        struct Chunk { double start, length; };
        std::vector<RepetitionSpan> spans;
        std::vector<Chunk> chunks;
        double cursor = 0.4;
        for (int r = 1; r <= params.reps_per_subject; ++r) {
            const double a = uniform(rng, 0.35, 0.5) * slow;
            const double pause = uniform(rng, 0.06, 0.15);
            const double b = uniform(rng, 0.35, 0.5) * slow;
            // Boundaries on the microsecond grid written to the annotation file.
            const double onset = std::round(cursor * 1e6) / 1e6;
            const double offset = std::round((onset + a + pause + b) * 1e6) / 1e6;
            spans.push_back(RepetitionSpan{r, onset, offset});
            chunks.push_back({onset, a});
            chunks.push_back({offset - b, b});
            cursor = offset + uniform(rng, 0.3, 0.6);
        }
        const double total = cursor + 0.1;

        AudioClip clip;
        clip.sample_rate = params.sample_rate;
        const double rate = params.sample_rate;
        clip.samples.assign(static_cast<std::size_t>(std::ceil(total * rate)), 0.0);
        const VoiceParams base{truth.f0, truth.jitter, truth.shimmer, 0.5, 1.0, truth.hnr_db};
        for (const auto& c : chunks) {
            VoiceParams vp = base;
            vp.f0 = truth.f0 * (1.0 + uniform(rng, -0.03, 0.03));
            vp.duration_s = c.length;
            const auto voice = synth_voice(vp, params.sample_rate, rng);
            const auto start = static_cast<std::size_t>(std::ceil(c.start * rate));
            for (std::size_t k = 0; k < voice.size() && start + k < clip.samples.size(); ++k) {
                clip.samples[start + k] += voice[k];
            }
        }
        for (double& v : clip.samples) v = std::clamp(v + normal(rng, 0.5 * kNoiseFloor), -1.0, 1.0);

        LandmarkTrack track;
        track.frame_rate = params.frame_rate;
        const auto n_frames = static_cast<std::size_t>(std::floor(total * params.frame_rate));
        const double scale = uniform(rng, 40.0, 60.0);
        const double angle = uniform(rng, -0.1, 0.1);
        const double cx = 320.0 + uniform(rng, -20.0, 20.0), cy = 200.0 + uniform(rng, -20.0, 20.0);
        const double ca = std::cos(angle), sa = std::sin(angle);
        track.frames.resize(n_frames);
        for (std::size_t k = 0; k < n_frames; ++k) {
            const double t = static_cast<double>(k) / params.frame_rate;
            double open = 0.0;
            for (const auto& s : spans) {
                if (t >= s.onset_s && t < s.offset_s) {
                    open = truth.opening * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * motion_hz * (t - s.onset_s)));
                }
            }
            const double dx = 5.0 * std::sin(2.0 * std::numbers::pi * 0.2 * t);
            const double dy = 5.0 * std::cos(2.0 * std::numbers::pi * 0.2 * t);
            for (int i = 0; i < static_cast<int>(kLandmarkCount); ++i) {
                double x = face[i][0], y = face[i][1] + drop_weight(i) * open;
                if (i == 48 || i == 60) x += 0.15 * open;
                if (i == 54 || i == 64) x -= 0.15 * open;
                auto& pt = track.frames[k][static_cast<std::size_t>(i)];
                pt[0] = cx + dx + scale * (ca * x - sa * y) + normal(rng, kLandmarkNoisePx);
                pt[1] = cy + dy + scale * (sa * x + ca * y) + normal(rng, kLandmarkNoisePx);
                pt[2] = normal(rng, kLandmarkNoisePx);
            }
        }

        std::string transcript;
        for (int r = 0; r < params.reps_per_subject; ++r) {
            transcript += synth_transcript(kDefaultReferenceText, p_error, rng) + "\n";
        }

        const std::filesystem::path dir = out_dir / truth.subject_id;
        write_wav(clip, dir / "audio.wav");
        write_landmarks(track, dir / "landmarks.csv");
        write_text_file(dir / "annotations.csv", format_annotations(spans));
        write_text_file(dir / "transcript.txt", transcript);

        SubjectEntry entry;
        entry.record.subject_id = truth.subject_id;
        entry.record.group = truth.group;
        entry.record.rater_scores = scores;
        Recording rec;
        rec.audio_wav = truth.subject_id + "/audio.wav";
        rec.landmarks_csv = truth.subject_id + "/landmarks.csv";
        rec.annotations_csv = truth.subject_id + "/annotations.csv";
        rec.transcripts_txt = truth.subject_id + "/transcript.txt";
        rec.frame_rate = params.frame_rate;
        entry.recordings.push_back(std::move(rec));
        truth.target = entry.record.target();
        result.manifest.subjects[si] = std::move(entry);
        result.truth[si] = std::move(truth);
    });

    std::string truth_csv = "subject,group,z1,z2,z3,f0,jitter,shimmer,hnr_db,opening,latent_target,target\n";
    for (const auto& t : result.truth) {
        truth_csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", t.subject_id, to_string(t.group), fmt6(t.z[0]),
                                 fmt6(t.z[1]), fmt6(t.z[2]), fmt6(t.f0), fmt6(t.jitter), fmt6(t.shimmer),
                                 fmt6(t.hnr_db), fmt6(t.opening), fmt6(t.latent_target), fmt6(t.target));
    }
    write_text_file(out_dir / "truth.csv", truth_csv);
    save_manifest(result.manifest, out_dir / "manifest.json");
    return result;
}

}  // namespace bulbar::report
