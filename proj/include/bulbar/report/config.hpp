#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "bulbar/audio/features.hpp"
#include "bulbar/core/instances.hpp"
#include "bulbar/models/model.hpp"
#include "bulbar/models/spec.hpp"
#include "json.hpp"

namespace bulbar::report {

enum class GridChoice { Full, Smoke };

struct RunConfig {
    std::optional<std::filesystem::path> manifest;
    std::filesystem::path out_dir = "out";
    std::vector<Modality> modalities{Modality::Audio, Modality::Video, Modality::Multimodal};
    std::vector<models::ModelFamily> families{models::ModelFamily::Svr, models::ModelFamily::Mlp,
                                              models::ModelFamily::Gbt};
    GridChoice grid = GridChoice::Full;
    /// Replaces the selected grid for a family when present.
    std::map<models::ModelFamily, std::vector<models::ModelSpec>> grid_overrides;
    audio::AudioConfig audio;
    ReconcileOptions reconcile;
    models::TrainingConfig training;
    std::uint64_t seed = 0;
    /// 0 selects the hardware concurrency.
    unsigned threads = 0;
    bool save_models = false;
};

/// Throws ValidationError naming the first out-of-range parameter.
void validate(const RunConfig& config);

/// Overlays the keys present in `j` onto `config`. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
void apply_config_json(RunConfig& config, const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);

/// Every setting with its current value, in the file layout accepted by
/// apply_config_json.
nlohmann::ordered_json config_to_json(const RunConfig& config);

std::vector<models::ModelSpec> grid_for(const RunConfig& config, models::ModelFamily family);

}  // namespace bulbar::report
