#include "bulbar/core/annotations.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar {

void validate_spans(const std::vector<RepetitionSpan>& spans) {
    std::set<int> indices;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const auto& s = spans[i];
        if (s.index < 1) {
            throw ValidationError(fmt::format("repetition index {} must be >= 1", s.index));
        }
        if (!indices.insert(s.index).second) {
            throw ValidationError(fmt::format("repetition {} annotated twice", s.index));
        }
        if (!(s.onset_s < s.offset_s) || s.onset_s < 0.0) {
            throw ValidationError(fmt::format("repetition {}: invalid span [{}, {})", s.index,
                                              s.onset_s, s.offset_s));
        }
        if (i > 0 && s.onset_s < spans[i - 1].offset_s) {
            throw ValidationError(fmt::format("repetition {} [{}, {}) overlaps repetition {} [{}, {})",
                                              s.index, s.onset_s, s.offset_s, spans[i - 1].index,
                                              spans[i - 1].onset_s, spans[i - 1].offset_s));
        }
    }
}

std::vector<RepetitionSpan> parse_annotations(const std::string& text, const std::string& name) {
    const auto lines = split_lines(text);
    if (lines.empty() || split_fields(lines[0]) != std::vector<std::string>{"rep", "onset_s", "offset_s"}) {
        throw ParseError(fmt::format("'{}': line 1: expected header 'rep,onset_s,offset_s'", name));
    }
    std::vector<RepetitionSpan> spans;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const std::string ctx = fmt::format("'{}': line {}", name, ln + 1);
        const auto f = split_fields(lines[ln]);
        if (f.size() != 3) throw ParseError(fmt::format("{}: expected 3 fields", ctx));
        spans.push_back({static_cast<int>(parse_int(f[0], ctx + " (rep)")),
                         parse_double(f[1], ctx + " (onset_s)"),
                         parse_double(f[2], ctx + " (offset_s)")});
    }
    std::stable_sort(spans.begin(), spans.end(),
                     [](const auto& a, const auto& b) { return a.onset_s < b.onset_s; });
    try {
        validate_spans(spans);
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("'{}': {}", name, e.what()));
    }
    return spans;
}

std::vector<RepetitionSpan> load_annotations(const std::filesystem::path& path) {
    return parse_annotations(read_text_file(path), path.string());
}

std::string format_annotations(const std::vector<RepetitionSpan>& spans) {
    std::string out = "rep,onset_s,offset_s\n";
    for (const auto& s : spans) out += fmt::format("{},{:.6f},{:.6f}\n", s.index, s.onset_s, s.offset_s);
    return out;
}

std::vector<std::string> load_transcripts(const std::filesystem::path& path) {
    auto lines = split_lines(read_text_file(path));
    for (auto& l : lines) l = std::string(trim(l));
    return lines;
}

}  // namespace bulbar
