#include "bulbar/core/manifest.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"
#include "json.hpp"

namespace bulbar {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ValidationError(fmt::format("{}: missing required field '{}'", where, key));
    }
    return obj.at(key);
}

std::optional<std::string> optional_path(const json& rec, const char* key, const std::string& where) {
    if (!rec.contains(key) || rec.at(key).is_null()) return std::nullopt;
    const json& v = rec.at(key);
    if (!v.is_string()) {
        throw ParseError(fmt::format("{}.{}: expected a string or null", where, key));
    }
    return v.get<std::string>();
}

Recording parse_recording(const json& rec, const std::string& where) {
    if (!rec.is_object()) throw ParseError(fmt::format("{}: expected an object", where));
    Recording r;
    r.audio_wav = optional_path(rec, "audio_wav", where);
    r.landmarks_csv = optional_path(rec, "landmarks_csv", where);
    r.annotations_csv = optional_path(rec, "annotations_csv", where);
    r.transcripts_txt = optional_path(rec, "transcripts_txt", where);
    if (rec.contains("frame_rate") && !rec.at("frame_rate").is_null()) {
        const json& fr = rec.at("frame_rate");
        if (!fr.is_number()) throw ParseError(fmt::format("{}.frame_rate: expected a number", where));
        const double v = fr.get<double>();
        if (!(v > 0.0)) {
            throw ValidationError(fmt::format("{}.frame_rate: must be positive, got {}", where, v));
        }
        r.frame_rate = v;
    }
    if (r.landmarks_csv && !r.frame_rate) {
        throw ValidationError(
            fmt::format("{}: 'frame_rate' is required when 'landmarks_csv' is given", where));
    }
    return r;
}

SubjectEntry parse_subject(const json& s, std::size_t index) {
    const std::string where = fmt::format("subjects[{}]", index);
    if (!s.is_object()) throw ParseError(fmt::format("{}: expected an object", where));

    SubjectEntry entry;
    const json& id = require(s, "id", where);
    if (!id.is_string()) throw ParseError(fmt::format("{}.id: expected a string", where));
    entry.record.subject_id = id.get<std::string>();

    const json& group = require(s, "group", where);
    if (!group.is_string()) throw ParseError(fmt::format("{}.group: expected a string", where));
    try {
        entry.record.group = parse_group(group.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}.group: {}", where, e.what()));
    }

    const json& scores = require(s, "scores", where);
    if (!scores.is_array() || scores.size() != kRaters) {
        throw ValidationError(
            fmt::format("{}.scores: expected {} arrays of {} integers", where, kRaters, kSubScores));
    }
    for (int r = 0; r < kRaters; ++r) {
        const json& row = scores[r];
        if (!row.is_array() || row.size() != kSubScores) {
            throw ValidationError(
                fmt::format("{}.scores[{}]: expected {} integers", where, r, kSubScores));
        }
        for (int k = 0; k < kSubScores; ++k) {
            if (!row[k].is_number_integer()) {
                throw ParseError(fmt::format("{}.scores[{}][{}]: expected an integer", where, r, k));
            }
            entry.record.rater_scores[r][k] = row[k].get<int>();
        }
    }
    try {
        entry.record.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: {}", where, e.what()));
    }

    if (s.contains("recordings")) {
        const json& recs = s.at("recordings");
        if (!recs.is_array()) throw ParseError(fmt::format("{}.recordings: expected an array", where));
        for (std::size_t i = 0; i < recs.size(); ++i) {
            entry.recordings.push_back(
                parse_recording(recs[i], fmt::format("{}.recordings[{}]", where, i)));
        }
    }
    return entry;
}

ordered_json path_json(const std::optional<std::string>& p) {
    return p ? ordered_json(*p) : ordered_json(nullptr);
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const std::string& relative) const {
    std::filesystem::path p(relative);
    if (p.is_absolute()) return p;
    return base_dir / p;
}

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(fmt::format("manifest: JSON syntax error at line {}, column {}: {}", line,
                                     col, e.what()));
    }
    if (!doc.is_object()) throw ParseError("manifest: top level must be an object");

    DatasetManifest m;
    m.base_dir = base_dir;
    if (doc.contains("reference_text") && !doc.at("reference_text").is_null()) {
        if (!doc.at("reference_text").is_string()) {
            throw ParseError("manifest.reference_text: expected a string");
        }
        m.reference_text = doc.at("reference_text").get<std::string>();
    }
    const json& subjects = require(doc, "subjects", "manifest");
    if (!subjects.is_array()) throw ParseError("manifest.subjects: expected an array");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
        SubjectEntry entry = parse_subject(subjects[i], i);
        if (!seen.insert(entry.record.subject_id).second) {
            throw ValidationError(fmt::format("subjects[{}]: duplicate subject id '{}'", i,
                                              entry.record.subject_id));
        }
        m.subjects.push_back(std::move(entry));
    }
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_manifest(text, path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string serialize_manifest(const DatasetManifest& manifest) {
    ordered_json doc;
    doc["reference_text"] = manifest.reference_text;
    ordered_json subjects = ordered_json::array();
    for (const auto& s : manifest.subjects) {
        ordered_json js;
        js["id"] = s.record.subject_id;
        js["group"] = std::string(to_string(s.record.group));
        js["scores"] = s.record.rater_scores;
        ordered_json recs = ordered_json::array();
        for (const auto& r : s.recordings) {
            ordered_json jr;
            jr["audio_wav"] = path_json(r.audio_wav);
            jr["landmarks_csv"] = path_json(r.landmarks_csv);
            jr["annotations_csv"] = path_json(r.annotations_csv);
            jr["transcripts_txt"] = path_json(r.transcripts_txt);
            jr["frame_rate"] = r.frame_rate ? ordered_json(*r.frame_rate) : ordered_json(nullptr);
            recs.push_back(std::move(jr));
        }
        js["recordings"] = std::move(recs);
        subjects.push_back(std::move(js));
    }
    doc["subjects"] = std::move(subjects);
    return doc.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    write_text_file(path, serialize_manifest(manifest));
}

}  // namespace bulbar
