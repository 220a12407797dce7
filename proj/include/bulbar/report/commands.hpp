#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bulbar/eval/friedman.hpp"
#include "bulbar/eval/metrics.hpp"
#include "bulbar/report/config.hpp"
#include "bulbar/report/synth.hpp"

namespace bulbar::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs fn and maps exceptions to exit codes: IoError -> 2, any other
/// error -> 1. The message goes to err.
int run_guarded(const std::function<void()>& fn, std::ostream& err);

/// Opens every referenced file and checks annotations against signal lengths.
void cmd_validate(const RunConfig& config, std::ostream& out);

/// Writes features_audio.csv, features_video.csv and exclusions.log.
void cmd_features(const RunConfig& config, std::ostream& out);

/// Nested LOSO for every requested (modality, model) pair. Writes
/// report_<modality>_<model>.csv, summary.csv, predictions.csv,
/// figure_scatter.svg, exclusions.log, friedman.csv and config_used.json.
std::vector<eval::EvaluationReport> cmd_evaluate(const RunConfig& config, std::ostream& out);

/// Friedman test over the per-subject RMSEs in a predictions file; writes
/// friedman.csv to out_dir.
eval::FriedmanResult cmd_stats(const std::filesystem::path& predictions, const std::filesystem::path& out_dir,
                               std::ostream& out);

SynthResult cmd_synth(const SynthParams& params, const std::filesystem::path& out_dir, std::ostream& out);

/// Command-line entry point; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bulbar::report
