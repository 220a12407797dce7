#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar {

inline constexpr const char* kDefaultReferenceText = "buy bobby a puppy";

/// One recording session. Paths are stored as written in the manifest and
/// resolved against the manifest's directory on use.
struct Recording {
    std::optional<std::string> audio_wav;
    std::optional<std::string> landmarks_csv;
    std::optional<std::string> annotations_csv;
    std::optional<std::string> transcripts_txt;
    /// Required whenever landmarks_csv is present.
    std::optional<double> frame_rate;

    friend bool operator==(const Recording&, const Recording&) = default;
};

struct SubjectEntry {
    SubjectRecord record;
    std::vector<Recording> recordings;

    friend bool operator==(const SubjectEntry&, const SubjectEntry&) = default;
};

struct DatasetManifest {
    std::filesystem::path base_dir;
    std::string reference_text = kDefaultReferenceText;
    std::vector<SubjectEntry> subjects;

    std::filesystem::path resolve(const std::string& relative) const;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Reads and validates a manifest. Referenced files are not opened.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Parses manifest text; `base_dir` anchors relative paths.
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

/// Canonical JSON form (stable key order, trailing newline).
std::string serialize_manifest(const DatasetManifest& manifest);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace bulbar
