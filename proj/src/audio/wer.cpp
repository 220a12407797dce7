#include "bulbar/audio/wer.hpp"

#include <algorithm>
#include <cctype>

#include "bulbar/error.hpp"

namespace bulbar::audio {

std::vector<std::string> normalize_words(std::string_view text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc)) {
            if (!cur.empty()) words.push_back(std::move(cur));
            cur.clear();
        } else if (!std::ispunct(uc)) {
            cur.push_back(static_cast<char>(std::tolower(uc)));
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

std::size_t word_edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
    std::vector<std::size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
    for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= ref.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= hyp.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[hyp.size()];
}

double word_error_rate(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
    if (ref.empty()) throw ValidationError("word error rate needs a non-empty reference");
    return static_cast<double>(word_edit_distance(ref, hyp)) / static_cast<double>(ref.size());
}

double word_error_rate(std::string_view reference, std::string_view hypothesis) {
    return word_error_rate(normalize_words(reference), normalize_words(hypothesis));
}

}  // namespace bulbar::audio
