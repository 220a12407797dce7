// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "bulbar/audio/dtw.hpp"
#include "bulbar/audio/mfcc.hpp"
#include "bulbar/audio/perturbation.hpp"
#include "bulbar/audio/pitch.hpp"
#include "bulbar/audio/wer.hpp"
#include "bulbar/core/instances.hpp"
#include "bulbar/core/manifest.hpp"
#include "bulbar/eval/friedman.hpp"
#include "bulbar/eval/loso.hpp"
#include "bulbar/eval/metrics.hpp"
#include "bulbar/models/gbt.hpp"
#include "bulbar/models/mlp.hpp"
#include "bulbar/models/spec.hpp"
#include "bulbar/models/svr.hpp"
#include "bulbar/report/commands.hpp"
#include "bulbar/report/pipeline.hpp"
#include "bulbar/report/synth.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace bulbar;
namespace fs = std::filesystem;
namespace t = bulbar::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failed checks; the first few are echoed in the result line.
struct Checks {
    int total = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok) failures.push_back(what);
    }
    bool ok() const { return failures.empty(); }
    std::string summary() const {
        if (ok()) return fmt::format("{} checks", total);
        std::string s = fmt::format("{}/{} checks failed: ", failures.size(), total);
        for (std::size_t i = 0; i < failures.size() && i < 3; ++i) s += (i ? "; " : "") + failures[i];
        return s;
    }
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failed_criteria = 0;

/// Runs one criterion. A positive limit adds the runtime bound to the verdict.
void run(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, fmt::format("exception: {}", e.what())};
    }
    const double elapsed = seconds_since(start);
    std::string timing = fmt::format("{:.2f} s", elapsed);
    if (limit_s > 0) {
        timing += fmt::format(" / limit {:.0f} s", limit_s);
        out.pass = out.pass && elapsed < limit_s;
    }
    if (!out.pass) ++failed_criteria;
    std::cout << fmt::format("{} {} {} ({}; {})", out.pass ? "PASS" : "FAIL", id, title, out.detail, timing)
              << std::endl;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

AudioClip voice(double f0, double jitter, double shimmer, std::uint64_t seed, std::optional<double> hnr_db) {
    std::mt19937_64 rng(seed);
    report::VoiceParams p;
    p.f0 = f0;
    p.jitter = jitter;
    p.shimmer = shimmer;
    p.duration_s = 1.0;
    p.hnr_db = hnr_db;
    AudioClip c;
    c.sample_rate = 16000;
    c.samples = report::synth_voice(p, c.sample_rate, rng);
    return c;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, sd);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

/// Synthetic cohort shared by criteria 3 and 7-9.
struct Cohort {
    fs::path dir;
    fs::path manifest_path;
    report::FeatureTable table;
};

const Cohort& cohort(const fs::path& root) {
    static std::optional<Cohort> c;
    if (!c) {
        Cohort made;
        made.dir = root / "cohort";
        report::SynthParams params;
        params.n_subjects = 20;
        params.reps_per_subject = 10;
        params.seed = 1;
        const auto synth = report::synth_cohort(params, made.dir);
        made.manifest_path = made.dir / "manifest.json";
        made.table = report::extract_features(synth.manifest, {});
        c = std::move(made);
    }
    return *c;
}

Outcome criterion1() {
    const double p = eval::chi_square_sf(13.6267, 8);
    return {std::abs(p - 0.092) <= 0.001, fmt::format("p = {:.6f}, expected 0.092 +/- 0.001", p)};
}

Outcome criterion2() {
    const std::size_t svr = models::enumerate_grid(models::ModelFamily::Svr).size();
    const std::size_t mlp = models::enumerate_grid(models::ModelFamily::Mlp).size();
    const std::size_t gbt = models::enumerate_grid(models::ModelFamily::Gbt).size();
    // C x epsilon x kernel; layers x rate x activation; rounds x depth x rate x subsample x colsample.
    const bool ok = svr == 6 * 4 * 3 && mlp == 12 * 3 * 4 && gbt == 4 * 5 * 6 * 5 * 5 && svr == 72 && mlp == 144 &&
                    gbt == 3000;
    return {ok, fmt::format("svr {}, mlp {}, gbt {}", svr, mlp, gbt)};
}

Outcome criterion3(const fs::path& root) {
    Checks c;
    const auto a = feature_names(Modality::Audio), v = feature_names(Modality::Video),
               m = feature_names(Modality::Multimodal);
    c.expect(a.size() == 18, "audio count");
    c.expect(v.size() == 15, "video count");
    c.expect(m.size() == 33, "multimodal count");
    c.expect(std::set<std::string>(m.begin(), m.end()).size() == m.size(), "multimodal names unique");
    std::vector<std::string> joined = a;
    joined.insert(joined.end(), v.begin(), v.end());
    c.expect(joined == m, "multimodal = audio then video");

    const auto& data = cohort(root);
    std::size_t instances = 0;
    for (Modality mod : {Modality::Audio, Modality::Video, Modality::Multimodal}) {
        const auto md = report::build_modality(data.table, mod, {});
        instances += md.instances.size();
        for (const auto& inst : md.instances) {
            c.expect(inst.repetition != kTemplateRepetition,
                     fmt::format("{} rep {} modeled", inst.subject_id, inst.repetition));
            c.expect(inst.features(mod).size() == feature_names(mod).size(), "vector width");
        }
    }
    return {c.ok(), fmt::format("18/15/33 named features, {} instances without repetition {}; {}", instances,
                                kTemplateRepetition, c.summary())};
}

Outcome criterion4() {
    Checks c;
    double worst_pitch = 0.0;
    for (double f = 100.0; f <= 400.0; f += 50.0) {
        const audio::PitchTrack p = audio::estimate_pitch(t::sine(f, 0.5, 1.0));
        const auto voiced = p.voiced_f0();
        c.expect(!voiced.empty() && voiced.size() == p.size(), fmt::format("{} Hz fully voiced", f));
        if (voiced.empty()) continue;
        for (double v : voiced) worst_pitch = std::max(worst_pitch, std::abs(v - f) / f);
        c.expect(std::abs(median(voiced) - f) <= 0.01 * f, fmt::format("{} Hz median", f));
    }
    c.expect(worst_pitch <= 0.01, "pitch frame error");

    double worst_recovery = 0.0;
    for (std::optional<double> hnr : {std::optional<double>{}, std::optional<double>{60.0}}) {
        for (double f0 : {100.0, 160.0, 220.0}) {
            for (double target : {0.005, 0.01, 0.02, 0.05}) {
                const AudioClip clip = voice(f0, target, target, 42, hnr);
                const auto ps = audio::extract_periods(clip, audio::estimate_pitch(clip));
                const double j = *audio::jitter_metrics(ps).local / target - 1.0;
                const double s = *audio::shimmer_metrics(ps).local / target - 1.0;
                worst_recovery = std::max({worst_recovery, std::abs(j), std::abs(s)});
                c.expect(std::abs(j) <= 0.10 && std::abs(s) <= 0.10,
                         fmt::format("recovery f0 {} target {}", f0, target));
            }
        }
    }

    // Pulse periods of a whole number of samples.
    double worst_constant = 0.0;
    for (double f0 : {100.0, 160.0, 200.0}) {
        const AudioClip clip = t::pulse_train(f0, 1.0);
        const auto ps = audio::extract_periods(clip, audio::estimate_pitch(clip));
        const double j = *audio::jitter_metrics(ps).local, s = *audio::shimmer_metrics(ps).local;
        worst_constant = std::max({worst_constant, j, s});
        c.expect(j <= 1e-12 && s <= 1e-12, fmt::format("constant train {} Hz", f0));
    }

    const AudioClip tone = t::sine(200.0, 0.5, 1.0);
    const double clean = audio::hnr_mean(tone, audio::estimate_pitch(tone));
    c.expect(clean >= 20.0, "clean tone HNR");
    double worst_mixed = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        AudioClip mixed = t::sine(200.0, 0.4, 1.0);
        const AudioClip noise = t::white_noise(0.4 / std::sqrt(2.0), 1.0, seed);
        for (std::size_t k = 0; k < mixed.samples.size(); ++k) mixed.samples[k] += noise.samples[k];
        audio::PitchConfig cfg;
        cfg.voicing_threshold = 0.2;
        const double h = audio::hnr_mean(mixed, audio::estimate_pitch(mixed, cfg));
        worst_mixed = std::max(worst_mixed, std::abs(h));
        c.expect(std::abs(h) <= 2.0, fmt::format("equal-power HNR seed {}", seed));
    }
    return {c.ok(), fmt::format("pitch err {:.4f}%, recovery err {:.3f}, constant {:.1e}, HNR clean {:.1f} dB, "
                                "equal-power |HNR| {:.2f} dB; {}",
                                100.0 * worst_pitch, worst_recovery, worst_constant, clean, worst_mixed, c.summary())};
}

Outcome criterion5() {
    Checks c;
    std::vector<std::vector<int>> seqs;
    for (int len = 1; len <= 6; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i) total *= 3;
        for (int code = 0; code < total; ++code) {
            std::vector<int> s;
            for (int i = 0, v = code; i < len; ++i, v /= 3) s.push_back(v % 3);
            seqs.push_back(s);
        }
    }
    std::vector<audio::FeatureMatrix> mats;
    for (const auto& s : seqs) {
        audio::FeatureMatrix m(static_cast<Eigen::Index>(s.size()), 1);
        for (std::size_t i = 0; i < s.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = s[i];
        mats.push_back(std::move(m));
    }
    std::vector<std::vector<std::vector<std::vector<int>>>> paths(7, std::vector<std::vector<std::vector<int>>>(7));
    for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= 6; ++m) paths[n][m] = t::enumerate_warping_paths(n, m);

    std::size_t pairs = 0, dtw_mismatch = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        for (std::size_t j = 0; j < seqs.size(); ++j) {
            const auto& a = seqs[i];
            const auto& b = seqs[j];
            const double expected = t::path_dtw(paths[a.size()][b.size()], a, b);
            const double got = audio::dtw_distance(mats[i], mats[j]);
            ++pairs;
            if (std::abs(got - expected) > 1e-12) ++dtw_mismatch;
        }
    }
    c.expect(dtw_mismatch == 0, fmt::format("{} DTW mismatches", dtw_mismatch));

    std::mt19937_64 rng(17);
    const std::vector<std::string> vocab{"buy", "bobby", "a", "puppy", "pup"};
    auto draw = [&](std::size_t min_len) {
        std::vector<std::string> s(min_len + rng() % (7 - min_len));
        for (auto& w : s) w = vocab[rng() % vocab.size()];
        return s;
    };
    std::size_t wer_mismatch = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto r = draw(1), h = draw(0);
        const std::size_t d = t::brute_force_edit_distance(r, h);
        if (audio::word_edit_distance(r, h) != d ||
            audio::word_error_rate(r, h) != static_cast<double>(d) / static_cast<double>(r.size())) {
            ++wer_mismatch;
        }
    }
    c.expect(wer_mismatch == 0, fmt::format("{} WER mismatches", wer_mismatch));
    return {c.ok(), fmt::format("{} DTW pairs up to length 6, 1000 WER cases; {}", pairs, c.summary())};
}

std::vector<double*> mlp_parameters(models::MlpModel& m) {
    std::vector<double*> out;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (Eigen::Index i = 0; i < m.weights[l].size(); ++i) out.push_back(m.weights[l].data() + i);
        for (Eigen::Index i = 0; i < m.biases[l].size(); ++i) out.push_back(m.biases[l].data() + i);
    }
    return out;
}

std::vector<double> flatten(const models::MlpGradient& g) {
    std::vector<double> out;
    for (std::size_t l = 0; l < g.d_weights.size(); ++l) {
        out.insert(out.end(), g.d_weights[l].data(), g.d_weights[l].data() + g.d_weights[l].size());
        out.insert(out.end(), g.d_biases[l].data(), g.d_biases[l].data() + g.d_biases[l].size());
    }
    return out;
}

double norm(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

Outcome criterion6() {
    using namespace bulbar::models;
    Checks c;
    double worst_grad = 0.0;
    for (Activation act : {Activation::Identity, Activation::Logistic, Activation::Tanh, Activation::Relu}) {
        for (std::uint64_t point = 0; point < 10; ++point) {
            const Eigen::MatrixXd x = random_matrix(20, 3, 100 + point);
            const Eigen::VectorXd y = random_matrix(20, 1, 200 + point).col(0);
            MlpModel m = init_mlp(3, {6, 4}, act, 300 + point);
            for (auto& b : m.biases) b = random_matrix(b.size(), 1, 400 + point, 0.3).col(0);
            const std::vector<double> analytic = flatten(mlp_loss_gradient(m, x, y));
            std::vector<double> diff;
            std::vector<double> numeric;
            const double h = 1e-6;
            for (double* p : mlp_parameters(m)) {
                const double saved = *p;
                *p = saved + h;
                const double up = mlp_loss_gradient(m, x, y).loss;
                *p = saved - h;
                const double down = mlp_loss_gradient(m, x, y).loss;
                *p = saved;
                numeric.push_back((up - down) / (2.0 * h));
            }
            for (std::size_t i = 0; i < analytic.size(); ++i) diff.push_back(analytic[i] - numeric[i]);
            const double rel = norm(diff) / std::max(norm(analytic), norm(numeric));
            worst_grad = std::max(worst_grad, rel);
            c.expect(rel <= 1e-4, fmt::format("gradient {} point {}", to_string(act), point));
        }
    }

    const Eigen::MatrixXd gx = random_matrix(20, 3, 11);
    const Eigen::VectorXd gy = (gx.col(0).array() * 3.0).sin() + gx.col(1).array().square();
    const GbtModel g = train_gbt(gx, gy, {50, 6, 1.0, 1.0, 1.0}, 1);
    for (std::size_t i = 1; i < g.training_loss.size(); ++i) {
        c.expect(g.training_loss[i] <= g.training_loss[i - 1] + 1e-15, fmt::format("gbt loss round {}", i));
    }
    c.expect(g.training_loss.back() < 1e-3, "gbt final loss");

    int kkt_fits = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Eigen::MatrixXd x = random_matrix(30, 4, seed);
        const Eigen::VectorXd y = x.col(0) * 1.5 - x.col(2) + random_matrix(30, 1, seed + 100, 0.3).col(0);
        for (Kernel k : {Kernel::Linear, Kernel::Rbf, Kernel::Sigmoid}) {
            for (double cval : {1.0, 10.0, 10000.0}) {
                const SvrSpec spec{cval, 0.2, k};
                const SvrModel m = train_svr(x, y, spec);
                ++kkt_fits;
                c.expect(m.converged, fmt::format("svr converged {}", describe(spec)));
                const Eigen::VectorXd r = y - m.predict(x);
                bool ok = std::abs(m.coef.sum()) <= 1e-9;
                for (Eigen::Index i = 0; i < r.size(); ++i) {
                    if (std::abs(r(i)) < spec.epsilon - 1e-3 && m.coef(i) != 0.0) ok = false;
                    if (std::abs(m.coef(i)) > spec.c + 1e-9) ok = false;
                }
                c.expect(ok, fmt::format("svr KKT seed {} {}", seed, describe(spec)));
            }
        }
    }
    Eigen::MatrixXd lx(11, 1);
    Eigen::VectorXd ly(11);
    for (int i = 0; i <= 10; ++i) {
        lx(i, 0) = 0.1 * i;
        ly(i) = 2.0 * lx(i, 0) + 1.0;
    }
    const double lin_err = (train_svr(lx, ly, {1000.0, 0.01, Kernel::Linear}).predict(lx) - ly).cwiseAbs().maxCoeff();
    c.expect(lin_err <= 0.05, "svr linear recovery");

    return {c.ok(), fmt::format("gradient rel err {:.2e}, gbt final loss {:.2e}, {} KKT fits, linear max err "
                                "{:.4f}; {}",
                                worst_grad, g.training_loss.back(), kkt_fits, lin_err, c.summary())};
}

Outcome criterion7(const fs::path& root) {
    Checks c;
    const auto& data = cohort(root);
    const auto md = report::build_modality(data.table, Modality::Multimodal, {});
    c.expect(md.instances.size() == 180, fmt::format("{} multimodal instances", md.instances.size()));
    for (const auto& inst : md.instances) c.expect(inst.repetition != kTemplateRepetition, "template modeled");

    const eval::Dataset d = eval::make_dataset(md.instances, Modality::Multimodal);
    const auto grid = models::smoke_grid(models::ModelFamily::Svr);
    const eval::LosoOptions options{.seed = 11, .threads = 4, .training = {}};
    const auto base = eval::nested_loso(d, grid, options);
    c.expect(base.size() == 20, fmt::format("{} folds", base.size()));

    for (int held : {0, 13}) {
        eval::Dataset perturbed = d;
        for (Eigen::Index r : perturbed.rows_of(held)) {
            perturbed.x.row(r) *= 50.0;
            perturbed.y(r) = -1000.0;
        }
        const auto moved = eval::nested_loso(perturbed, grid, options);
        const auto& a = base[static_cast<std::size_t>(held)];
        const auto& b = moved[static_cast<std::size_t>(held)];
        c.expect(a.standardizer == b.standardizer, fmt::format("standardizer moved for subject {}", held));
        c.expect(a.chosen_index == b.chosen_index, fmt::format("chosen spec moved for subject {}", held));
        c.expect(a.inner_scores == b.inner_scores, fmt::format("inner scores moved for subject {}", held));
    }
    return {c.ok(), fmt::format("{} folds, {} multimodal instances, held-out perturbation of 2 subjects; {}",
                                base.size(), md.instances.size(), c.summary())};
}

int evaluate(const fs::path& manifest, const fs::path& out, const std::vector<std::string>& extra) {
    std::vector<std::string> args{"evaluate", "--manifest", manifest.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    std::ostringstream sink, err;
    const int code = report::run_cli(args, sink, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

const std::vector<std::string> kSmokeArgs{"--grid", "smoke", "--model", "all", "--modality", "all",
                                          "--threads", "4", "--seed", "7"};

Outcome criterion8(const fs::path& root, double& full_grid_s) {
    Checks c;
    const auto& data = cohort(root);

    const fs::path run_a = root / "run_a";
    c.expect(evaluate(data.manifest_path, run_a, kSmokeArgs) == 0, "smoke evaluate exit code");
    const auto rows = lines_of(read_file(run_a / "summary.csv"));
    c.expect(rows.size() == 10, fmt::format("{} summary lines", rows.size()));
    std::optional<double> multimodal_svr;
    std::size_t r = 1;
    for (const char* mod : {"audio", "video", "multimodal"}) {
        for (const char* model : {"svr", "mlp", "gbt"}) {
            const std::string prefix = fmt::format("{},{},20,", mod, model);
            const bool present = r < rows.size() && rows[r].rfind(prefix, 0) == 0;
            c.expect(present, fmt::format("summary row {} is {}/{}", r, mod, model));
            if (present && std::string(mod) == "multimodal" && std::string(model) == "svr") {
                multimodal_svr = std::stod(rows[r].substr(prefix.size()));
            }
            ++r;
        }
    }
    c.expect(multimodal_svr && *multimodal_svr <= 0.6, "multimodal SVR mRMSE above 0.6");

    const auto start = Clock::now();
    c.expect(evaluate(data.manifest_path, root / "full_svr",
                      {"--grid", "full", "--model", "svr", "--modality", "all", "--threads", "0", "--seed", "7"}) == 0,
             "full-grid evaluate exit code");
    full_grid_s = seconds_since(start);
    c.expect(full_grid_s < 600.0, "full grid slower than 10 minutes");

    return {c.ok(), fmt::format("multimodal SVR smoke mRMSE {}, 9-cell summary, full SVR grid (72 specs x 3 "
                                "modalities) in {:.0f} s; {}",
                                multimodal_svr ? fmt::format("{:.3f}", *multimodal_svr) : "n/a", full_grid_s,
                                c.summary())};
}

Outcome criterion9(const fs::path& root) {
    Checks c;
    const auto& data = cohort(root);
    const fs::path run_a = root / "run_a", run_b = root / "run_b";
    c.expect(evaluate(data.manifest_path, run_b, kSmokeArgs) == 0, "second evaluate exit code");

    auto outputs = [](const fs::path& dir) {
        std::set<std::string> names;
        for (const auto& e : fs::directory_iterator(dir)) {
            const auto ext = e.path().extension();
            if (ext == ".csv" || ext == ".svg") names.insert(e.path().filename().string());
        }
        return names;
    };
    const auto names = outputs(run_a);
    c.expect(names == outputs(run_b), "different output files");
    c.expect(names.count("summary.csv") && names.count("predictions.csv") && names.count("figure_scatter.svg"),
             "missing outputs");
    for (const auto& name : names) {
        c.expect(read_file(run_a / name) == read_file(run_b / name), name + " differs");
    }
    return {c.ok(), fmt::format("{} CSV/SVG files compared, threads 4; {}", names.size(), c.summary())};
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / "bulbar_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    run(1, "chi-square anchor", 1.0, criterion1);
    run(2, "grid sizes", 1.0, criterion2);
    run(3, "feature counts", 0.0, [&] { return criterion3(root); });
    run(4, "DSP oracles", 30.0, criterion4);
    run(5, "DTW and WER exact oracles", 60.0, criterion5);
    run(6, "model correctness", 60.0, criterion6);
    run(7, "CV harness integrity", 0.0, [&] { return criterion7(root); });
    double full_grid_s = 0.0;
    run(8, "end-to-end synthetic recovery", 0.0, [&] { return criterion8(root, full_grid_s); });
    run(9, "determinism", 0.0, [&] { return criterion9(root); });

    std::error_code ec;
    fs::remove_all(root, ec);
    std::cout << (failed_criteria == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed_criteria))
              << std::endl;
    return failed_criteria == 0 ? 0 : 1;
}
