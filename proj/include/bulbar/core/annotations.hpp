#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar {

/// Reads `rep,onset_s,offset_s`. Spans are returned sorted by onset and
/// checked with validate_spans.
std::vector<RepetitionSpan> load_annotations(const std::filesystem::path& path);
std::vector<RepetitionSpan> parse_annotations(const std::string& text,
                                              const std::string& name = "<memory>");
std::string format_annotations(const std::vector<RepetitionSpan>& spans);

/// Throws ValidationError unless every span has onset < offset, positive
/// unique indices, and the spans are sorted and non-overlapping.
void validate_spans(const std::vector<RepetitionSpan>& spans);

/// One hypothesis per line; line i belongs to repetition i (1-based).
std::vector<std::string> load_transcripts(const std::filesystem::path& path);

}  // namespace bulbar
