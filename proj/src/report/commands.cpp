#include "bulbar/report/commands.hpp"

#include <algorithm>
#include <iostream>
#include <set>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "bulbar/core/annotations.hpp"
#include "bulbar/core/fileio.hpp"
#include "bulbar/core/landmarks_io.hpp"
#include "bulbar/core/manifest.hpp"
#include "bulbar/core/slicing.hpp"
#include "bulbar/core/wav.hpp"
#include "bulbar/error.hpp"
#include "bulbar/eval/loso.hpp"
#include "bulbar/eval/parallel.hpp"
#include "bulbar/report/pipeline.hpp"
#include "bulbar/report/svg.hpp"
#include "bulbar/report/tables.hpp"

namespace bulbar::report {

namespace {

DatasetManifest require_manifest(const RunConfig& config) {
    if (!config.manifest) throw ValidationError("--manifest is required");
    return load_manifest(*config.manifest);
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& out) {
    for (const auto& w : warnings) out << "warning: " << w << "\n";
}

std::size_t subject_count(const std::vector<Instance>& instances) {
    std::set<std::string> ids;
    for (const auto& i : instances) ids.insert(i.subject_id);
    return ids.size();
}

}  // namespace

int run_guarded(const std::function<void()>& fn, std::ostream& err) {
    try {
        fn();
        return kExitOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

void cmd_validate(const RunConfig& config, std::ostream& out) {
    validate(config);
    const DatasetManifest manifest = require_manifest(config);
    std::size_t recordings = 0, repetitions = 0;
    for (const auto& s : manifest.subjects) {
        std::set<int> reps;
        for (const auto& rec : s.recordings) {
            ++recordings;
            std::vector<RepetitionSpan> spans;
            if (rec.annotations_csv) spans = load_annotations(manifest.resolve(*rec.annotations_csv));
            for (const auto& sp : spans) {
                if (!reps.insert(sp.index).second) {
                    throw ValidationError(fmt::format("subject '{}': repetition {} is annotated more than once",
                                                      s.record.subject_id, sp.index));
                }
            }
            repetitions += spans.size();
            if (rec.audio_wav) {
                const AudioClip clip = load_audio(manifest.resolve(*rec.audio_wav));
                for (const auto& sp : spans) {
                    try {
                        span_indices(sp, clip.rate(), clip.size());
                    } catch (const ValidationError& e) {
                        throw ValidationError(fmt::format("{}: {}", *rec.audio_wav, e.what()));
                    }
                }
            }
            if (rec.landmarks_csv) {
                const LandmarkTrack track = load_landmarks(manifest.resolve(*rec.landmarks_csv), *rec.frame_rate);
                for (const auto& sp : spans) {
                    try {
                        span_indices(sp, track.rate(), track.size());
                    } catch (const ValidationError& e) {
                        throw ValidationError(fmt::format("{}: {}", *rec.landmarks_csv, e.what()));
                    }
                }
            }
            if (rec.transcripts_txt) load_transcripts(manifest.resolve(*rec.transcripts_txt));
        }
    }
    out << fmt::format("ok: {} subjects, {} recordings, {} annotated repetitions\n", manifest.subjects.size(),
                       recordings, repetitions);
}

void cmd_features(const RunConfig& config, std::ostream& out) {
    validate(config);
    const DatasetManifest manifest = require_manifest(config);
    const FeatureTable table = extract_features(manifest, PipelineConfig{config.audio, config.threads});
    std::vector<Exclusion> exclusions;
    for (Modality m : config.modalities) {
        auto data = build_modality(table, m, config.reconcile);
        out << fmt::format("{}: {} instances, {} excluded\n", to_string(m), data.instances.size(),
                           data.exclusions.size());
        exclusions.insert(exclusions.end(), data.exclusions.begin(), data.exclusions.end());
    }
    print_warnings(table.warnings, out);
    write_text_file(config.out_dir / "features_audio.csv", audio_features_csv(table.audio_rows));
    write_text_file(config.out_dir / "features_video.csv", video_features_csv(table.video_rows));
    write_text_file(config.out_dir / "exclusions.log", exclusions_log(exclusions));
}

std::vector<eval::EvaluationReport> cmd_evaluate(const RunConfig& config, std::ostream& out) {
    validate(config);
    const DatasetManifest manifest = require_manifest(config);
    const FeatureTable table = extract_features(manifest, PipelineConfig{config.audio, config.threads});
    print_warnings(table.warnings, out);

    std::vector<Exclusion> exclusions;
    std::vector<eval::EvaluationReport> reports;
    for (Modality m : config.modalities) {
        const ModalityData data = build_modality(table, m, config.reconcile);
        exclusions.insert(exclusions.end(), data.exclusions.begin(), data.exclusions.end());
        const std::size_t n_subjects = subject_count(data.instances);
        if (n_subjects < 3) {
            throw ValidationError(fmt::format("{}: {} subjects after reconciliation, need at least 3",
                                              to_string(m), n_subjects));
        }
        for (models::ModelFamily f : config.families) {
            const auto grid = grid_for(config, f);
            out << fmt::format("{} / {}: {} instances, {} subjects, {} grid specs\n", to_string(m),
                               models::to_string(f), data.instances.size(), n_subjects, grid.size());
            eval::LosoOptions opts;
            opts.seed = eval::task_seed(config.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(f), 0);
            opts.threads = config.threads;
            opts.training = config.training;
            auto folds = eval::nested_loso(data.instances, m, grid, opts);
            reports.push_back(eval::aggregate_metrics(std::move(folds), m, f));
            out << fmt::format("  mRMSE {:.4f}\n", reports.back().mrmse);
        }
    }

    // Single writer, after all computation.
    const auto& dir = config.out_dir;
    for (const auto& r : reports) {
        write_text_file(dir / fmt::format("report_{}_{}.csv", to_string(r.modality), models::to_string(r.family)),
                        report_csv(r));
    }
    write_text_file(dir / "summary.csv", summary_csv(reports));
    const std::string predictions = predictions_csv(reports);
    write_text_file(dir / "predictions.csv", predictions);
    write_text_file(dir / "exclusions.log", exclusions_log(exclusions));
    write_text_file(dir / "config_used.json", config_to_json(config).dump(2) + "\n");

    const auto best = std::min_element(reports.begin(), reports.end(),
                                       [](const auto& a, const auto& b) { return a.mrmse < b.mrmse; });
    std::vector<ScatterPoint> points;
    for (const auto& f : best->folds) {
        for (const auto& p : f.predictions) points.push_back(ScatterPoint{p.y_true, p.y_pred, f.group});
    }
    write_scatter_svg(points,
                      fmt::format("{} / {} (mRMSE {:.2f})", to_string(best->modality), models::to_string(best->family),
                                  best->mrmse),
                      dir / "figure_scatter.svg");

    if (reports.size() >= 2) {
        try {
            const FriedmanInput in = friedman_input(parse_predictions_csv(predictions, "predictions.csv"));
            const auto res = eval::friedman_test(in.blocks);
            write_text_file(dir / "friedman.csv", friedman_csv(res, in));
        } catch (const ValidationError& e) {
            out << "warning: Friedman test skipped: " << e.what() << "\n";
        }
    }

    if (config.save_models) {
        for (const auto& r : reports) {
            for (const auto& f : r.folds) {
                write_text_file(dir / "models" /
                                    fmt::format("{}_{}_{}.json", to_string(r.modality), models::to_string(r.family),
                                                f.subject_id),
                                f.model->to_json().dump(1) + "\n");
            }
        }
    }
    return reports;
}

eval::FriedmanResult cmd_stats(const std::filesystem::path& predictions, const std::filesystem::path& out_dir,
                               std::ostream& out) {
    const auto records = parse_predictions_csv(read_text_file(predictions), predictions.string());
    const FriedmanInput in = friedman_input(records);
    const auto res = eval::friedman_test(in.blocks);
    write_text_file(out_dir / "friedman.csv", friedman_csv(res, in));
    out << fmt::format("chi2 = {:.4f}, df = {}, p = {:.4f} ({} blocks, {} conditions)\n", res.chi2, res.df, res.p,
                       in.blocks.size(), in.conditions.size());
    return res;
}

SynthResult cmd_synth(const SynthParams& params, const std::filesystem::path& out_dir, std::ostream& out) {
    SynthResult r = synth_cohort(params, out_dir);
    out << fmt::format("wrote {} subjects to {}\n", r.truth.size(), out_dir.string());
    return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Speech-impairment feature extraction and nested-LOSO regression"};
    app.require_subcommand(1);

    struct Common {
        std::string config, manifest, out, modality, model, grid;
        std::uint64_t seed = 0;
        unsigned threads = 0;
        bool clamp = false, save_models = false;
    };
    Common c;

    auto add_common = [&](CLI::App* sub, bool modeling) {
        sub->add_option("--config", c.config, "JSON configuration file");
        sub->add_option("--manifest", c.manifest, "Dataset manifest (JSON)");
        sub->add_option("--out", c.out, "Output directory");
        sub->add_option("--modality", c.modality, "audio, video, multimodal or all")
            ->check(CLI::IsMember({"audio", "video", "multimodal", "all"}));
        sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
        if (modeling) {
            sub->add_option("--model", c.model, "svr, mlp, gbt or all")
                ->check(CLI::IsMember({"svr", "mlp", "gbt", "all"}));
            sub->add_option("--seed", c.seed, "Master seed");
            sub->add_option("--grid", c.grid, "full or smoke")->check(CLI::IsMember({"full", "smoke"}));
            sub->add_flag("--clamp-predictions", c.clamp, "Clamp predictions to [5, 25]");
            sub->add_flag("--save-models", c.save_models, "Dump fitted fold models as JSON");
        }
    };

    auto* features = app.add_subcommand("features", "Extract per-repetition features");
    add_common(features, false);
    auto* evaluate = app.add_subcommand("evaluate", "Nested LOSO evaluation and reports");
    add_common(evaluate, true);
    auto* validate_cmd = app.add_subcommand("validate", "Check a manifest and the files it references");
    add_common(validate_cmd, false);

    auto* stats = app.add_subcommand("stats", "Friedman test over a predictions file");
    std::string predictions_path, stats_out = "out";
    stats->add_option("--predictions", predictions_path, "predictions.csv (default: <out>/predictions.csv)");
    stats->add_option("--out", stats_out, "Output directory");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
    SynthParams sp;
    std::string synth_out;
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--subjects", sp.n_subjects, "Number of subjects");
    synth->add_option("--reps", sp.reps_per_subject, "Repetitions per subject");
    synth->add_option("--als-fraction", sp.als_fraction, "Fraction of ALS subjects");
    synth->add_option("--seed", sp.seed, "Seed");
    synth->add_option("--sample-rate", sp.sample_rate, "Audio sample rate (Hz)");
    synth->add_option("--frame-rate", sp.frame_rate, "Video frame rate (fps)");
    synth->add_option("--target-noise", sp.target_noise_sd, "SD of the target noise");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    auto build_config = [&](CLI::App* sub) {
        RunConfig rc;
        if (!c.config.empty()) rc = load_config(c.config);
        auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
        if (given("--manifest")) rc.manifest = c.manifest;
        if (given("--out")) rc.out_dir = c.out;
        if (given("--threads")) rc.threads = c.threads;
        if (given("--modality")) {
            rc.modalities = c.modality == "all"
                                ? std::vector<Modality>{Modality::Audio, Modality::Video, Modality::Multimodal}
                                : std::vector<Modality>{parse_modality(c.modality)};
        }
        if (given("--model")) {
            rc.families = c.model == "all"
                              ? std::vector<models::ModelFamily>{models::ModelFamily::Svr, models::ModelFamily::Mlp,
                                                                 models::ModelFamily::Gbt}
                              : std::vector<models::ModelFamily>{models::parse_family(c.model)};
        }
        if (given("--seed")) rc.seed = c.seed;
        if (given("--grid")) rc.grid = c.grid == "full" ? GridChoice::Full : GridChoice::Smoke;
        if (given("--clamp-predictions")) rc.training.clamp.enabled = true;
        if (given("--save-models")) rc.save_models = true;
        validate(rc);
        return rc;
    };

    return run_guarded(
        [&] {
            if (features->parsed()) cmd_features(build_config(features), out);
            else if (evaluate->parsed()) cmd_evaluate(build_config(evaluate), out);
            else if (validate_cmd->parsed()) cmd_validate(build_config(validate_cmd), out);
            else if (stats->parsed()) {
                const std::filesystem::path p =
                    predictions_path.empty() ? std::filesystem::path(stats_out) / "predictions.csv"
                                             : std::filesystem::path(predictions_path);
                cmd_stats(p, stats_out, out);
            } else if (synth->parsed()) {
                cmd_synth(sp, synth_out, out);
            }
        },
        err);
}

}  // namespace bulbar::report
