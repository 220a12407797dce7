#include "bulbar/report/config.hpp"

#include <set>
#include <string>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar::report {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(fmt::format("config {}: expected an object", where));
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) {
            throw ValidationError(fmt::format("config {}: unknown key '{}'", where.empty() ? "" : where, key));
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(fmt::format("config: {}", message));
}

}  // namespace

void validate(const RunConfig& c) {
    const auto& p = c.audio.pitch;
    require(p.f0_floor > 0.0, "pitch.f0_floor must be > 0");
    require(p.f0_ceiling > p.f0_floor, "pitch.f0_ceiling must exceed pitch.f0_floor");
    require(p.window_s > 0.0 && p.hop_s > 0.0, "pitch.window_s and pitch.hop_s must be > 0");
    require(p.voicing_threshold > 0.0 && p.voicing_threshold < 1.0, "pitch.voicing_threshold must be in (0, 1)");
    const auto& q = c.audio.pause;
    require(q.rel_threshold_db < 0.0, "pause.rel_threshold_db must be < 0");
    require(q.min_pause_s > 0.0, "pause.min_pause_s must be > 0");
    require(q.hop_s > 0.0 && q.hop_s <= q.window_s, "pause requires 0 < hop_s <= window_s");
    const auto& m = c.audio.mfcc;
    require(m.window_s > 0.0 && m.hop_s > 0.0, "mfcc.window_s and mfcc.hop_s must be > 0");
    require(m.n_coeffs >= 1 && m.n_mels >= m.n_coeffs, "mfcc requires 1 <= n_coeffs <= n_mels");
    const auto& t = c.training;
    require(t.svr.tolerance > 0.0, "svr.tolerance must be > 0");
    require(t.svr.max_iter_factor > 0.0, "svr.max_iter_factor must be > 0");
    require(t.mlp.batch_size >= 1, "mlp.batch_size must be >= 1");
    require(t.mlp.epochs >= 1, "mlp.epochs must be >= 1");
    require(t.mlp.tol >= 0.0, "mlp.tol must be >= 0");
    require(t.mlp.n_iter_no_change >= 1, "mlp.n_iter_no_change must be >= 1");
    require(t.mlp.beta1 >= 0.0 && t.mlp.beta1 < 1.0, "mlp.beta1 must be in [0, 1)");
    require(t.mlp.beta2 >= 0.0 && t.mlp.beta2 < 1.0, "mlp.beta2 must be in [0, 1)");
    require(t.mlp.adam_epsilon > 0.0, "mlp.adam_epsilon must be > 0");
    require(t.gbt.lambda >= 0.0, "gbt.lambda must be >= 0");
    require(t.gbt.min_split_gain >= 0.0, "gbt.min_split_gain must be >= 0");
    require(t.gbt.min_samples_leaf >= 1, "gbt.min_samples_leaf must be >= 1");
    require(t.clamp.low < t.clamp.high, "clamp.low must be < clamp.high");
    require(!c.modalities.empty(), "at least one modality is required");
    require(!c.families.empty(), "at least one model family is required");
    for (const auto& [family, grid] : c.grid_overrides) {
        require(!grid.empty(), fmt::format("grids.{} must not be empty", models::to_string(family)));
        for (const auto& spec : grid) {
            if (models::family_of(spec) != family) {
                throw ValidationError(fmt::format("config: grids.{} contains a {} spec",
                                                  models::to_string(family), models::to_string(models::family_of(spec))));
            }
            models::validate(spec);
        }
    }
}

void apply_config_json(RunConfig& c, const json& j) {
    try {
        check_keys(j, "", {"manifest", "out", "modalities", "models", "grid", "grids", "seed", "threads",
                           "save_models", "pitch", "pause", "mfcc", "video", "svr", "mlp", "gbt", "clamp"});
        if (j.contains("manifest")) c.manifest = j.at("manifest").get<std::string>();
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        if (j.contains("modalities")) {
            c.modalities.clear();
            for (const auto& m : j.at("modalities")) c.modalities.push_back(parse_modality(m.get<std::string>()));
        }
        if (j.contains("models")) {
            c.families.clear();
            for (const auto& m : j.at("models")) c.families.push_back(models::parse_family(m.get<std::string>()));
        }
        if (j.contains("grid")) {
            const auto g = j.at("grid").get<std::string>();
            if (g == "full") c.grid = GridChoice::Full;
            else if (g == "smoke") c.grid = GridChoice::Smoke;
            else throw ValidationError(fmt::format("config grid: expected 'full' or 'smoke', got '{}'", g));
        }
        if (j.contains("grids")) {
            check_keys(j.at("grids"), "grids", {"svr", "mlp", "gbt"});
            for (const auto& [name, list] : j.at("grids").items()) {
                std::vector<models::ModelSpec> specs;
                for (const auto& s : list) {
                    json with_family = s;
                    with_family["family"] = name;
                    specs.push_back(models::spec_from_json(with_family));
                }
                c.grid_overrides[models::parse_family(name)] = std::move(specs);
            }
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        read(j, "threads", c.threads);
        read(j, "save_models", c.save_models);
        if (j.contains("pitch")) {
            const auto& p = j.at("pitch");
            check_keys(p, "pitch", {"f0_floor", "f0_ceiling", "window_s", "hop_s", "voicing_threshold"});
            read(p, "f0_floor", c.audio.pitch.f0_floor);
            read(p, "f0_ceiling", c.audio.pitch.f0_ceiling);
            read(p, "window_s", c.audio.pitch.window_s);
            read(p, "hop_s", c.audio.pitch.hop_s);
            read(p, "voicing_threshold", c.audio.pitch.voicing_threshold);
        }
        if (j.contains("pause")) {
            const auto& p = j.at("pause");
            check_keys(p, "pause", {"rel_threshold_db", "min_pause_s", "window_s", "hop_s"});
            read(p, "rel_threshold_db", c.audio.pause.rel_threshold_db);
            read(p, "min_pause_s", c.audio.pause.min_pause_s);
            read(p, "window_s", c.audio.pause.window_s);
            read(p, "hop_s", c.audio.pause.hop_s);
        }
        if (j.contains("mfcc")) {
            const auto& p = j.at("mfcc");
            check_keys(p, "mfcc", {"window_s", "hop_s", "n_mels", "n_coeffs"});
            read(p, "window_s", c.audio.mfcc.window_s);
            read(p, "hop_s", c.audio.mfcc.hop_s);
            read(p, "n_mels", c.audio.mfcc.n_mels);
            read(p, "n_coeffs", c.audio.mfcc.n_coeffs);
        }
        if (j.contains("video")) {
            const auto& p = j.at("video");
            check_keys(p, "video", {"exclude_template"});
            read(p, "exclude_template", c.reconcile.exclude_template_in_video);
        }
        if (j.contains("svr")) {
            const auto& p = j.at("svr");
            check_keys(p, "svr", {"tolerance", "max_iter_factor"});
            read(p, "tolerance", c.training.svr.tolerance);
            read(p, "max_iter_factor", c.training.svr.max_iter_factor);
        }
        if (j.contains("mlp")) {
            const auto& p = j.at("mlp");
            check_keys(p, "mlp",
                       {"batch_size", "epochs", "tol", "n_iter_no_change", "beta1", "beta2", "adam_epsilon"});
            read(p, "batch_size", c.training.mlp.batch_size);
            read(p, "epochs", c.training.mlp.epochs);
            read(p, "tol", c.training.mlp.tol);
            read(p, "n_iter_no_change", c.training.mlp.n_iter_no_change);
            read(p, "beta1", c.training.mlp.beta1);
            read(p, "beta2", c.training.mlp.beta2);
            read(p, "adam_epsilon", c.training.mlp.adam_epsilon);
        }
        if (j.contains("gbt")) {
            const auto& p = j.at("gbt");
            check_keys(p, "gbt", {"lambda", "min_split_gain", "min_samples_leaf"});
            read(p, "lambda", c.training.gbt.lambda);
            read(p, "min_split_gain", c.training.gbt.min_split_gain);
            read(p, "min_samples_leaf", c.training.gbt.min_samples_leaf);
        }
        if (j.contains("clamp")) {
            const auto& p = j.at("clamp");
            check_keys(p, "clamp", {"enabled", "low", "high"});
            read(p, "enabled", c.training.clamp.enabled);
            read(p, "low", c.training.clamp.low);
            read(p, "high", c.training.clamp.high);
        }
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("config: {}", e.what()));
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
    RunConfig c;
    try {
        apply_config_json(c, j);
        validate(c);
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return c;
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    if (c.manifest) j["manifest"] = c.manifest->string();
    j["out"] = c.out_dir.string();
    j["modalities"] = ordered_json::array();
    for (auto m : c.modalities) j["modalities"].push_back(std::string(to_string(m)));
    j["models"] = ordered_json::array();
    for (auto f : c.families) j["models"].push_back(std::string(models::to_string(f)));
    j["grid"] = c.grid == GridChoice::Full ? "full" : "smoke";
    if (!c.grid_overrides.empty()) {
        ordered_json grids;
        for (const auto& [family, specs] : c.grid_overrides) {
            ordered_json list = ordered_json::array();
            for (const auto& s : specs) {
                ordered_json js = models::to_json(s);
                js.erase("family");
                list.push_back(std::move(js));
            }
            grids[std::string(models::to_string(family))] = std::move(list);
        }
        j["grids"] = std::move(grids);
    }
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["save_models"] = c.save_models;
    const auto& p = c.audio.pitch;
    j["pitch"] = {{"f0_floor", p.f0_floor}, {"f0_ceiling", p.f0_ceiling}, {"window_s", p.window_s},
                  {"hop_s", p.hop_s}, {"voicing_threshold", p.voicing_threshold}};
    const auto& q = c.audio.pause;
    j["pause"] = {{"rel_threshold_db", q.rel_threshold_db}, {"min_pause_s", q.min_pause_s},
                  {"window_s", q.window_s}, {"hop_s", q.hop_s}};
    const auto& m = c.audio.mfcc;
    j["mfcc"] = {{"window_s", m.window_s}, {"hop_s", m.hop_s}, {"n_mels", m.n_mels}, {"n_coeffs", m.n_coeffs}};
    j["video"] = {{"exclude_template", c.reconcile.exclude_template_in_video}};
    const auto& t = c.training;
    j["svr"] = {{"tolerance", t.svr.tolerance}, {"max_iter_factor", t.svr.max_iter_factor}};
    j["mlp"] = {{"batch_size", t.mlp.batch_size}, {"epochs", t.mlp.epochs},
                {"tol", t.mlp.tol},               {"n_iter_no_change", t.mlp.n_iter_no_change},
                {"beta1", t.mlp.beta1},           {"beta2", t.mlp.beta2},
                {"adam_epsilon", t.mlp.adam_epsilon}};
    j["gbt"] = {{"lambda", t.gbt.lambda}, {"min_split_gain", t.gbt.min_split_gain},
                {"min_samples_leaf", t.gbt.min_samples_leaf}};
    j["clamp"] = {{"enabled", t.clamp.enabled}, {"low", t.clamp.low}, {"high", t.clamp.high}};
    return j;
}

std::vector<models::ModelSpec> grid_for(const RunConfig& c, models::ModelFamily family) {
    if (auto it = c.grid_overrides.find(family); it != c.grid_overrides.end()) return it->second;
    return c.grid == GridChoice::Full ? models::enumerate_grid(family) : models::smoke_grid(family);
}

}  // namespace bulbar::report
