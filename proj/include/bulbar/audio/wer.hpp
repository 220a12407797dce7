#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bulbar::audio {

/// Lower-cases, strips punctuation, and splits on whitespace.
std::vector<std::string> normalize_words(std::string_view text);

/// Word-level edit distance (substitutions + insertions + deletions).
std::size_t word_edit_distance(const std::vector<std::string>& reference,
                               const std::vector<std::string>& hypothesis);

/// Edit distance over the reference length. Throws ValidationError for an
/// empty reference.
double word_error_rate(const std::vector<std::string>& reference,
                       const std::vector<std::string>& hypothesis);
double word_error_rate(std::string_view reference, std::string_view hypothesis);

}  // namespace bulbar::audio
