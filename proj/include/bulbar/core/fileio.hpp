#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bulbar {

/// Whole-file reads/writes; failures raise IoError naming the path.
std::string read_text_file(const std::filesystem::path& path);
std::vector<char> read_binary_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);
void write_binary_file(const std::filesystem::path& path, const std::vector<char>& content);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Strict numeric parsing; throw ParseError with `context` on failure.
double parse_double(std::string_view s, std::string_view context);
long long parse_int(std::string_view s, std::string_view context);

}  // namespace bulbar
