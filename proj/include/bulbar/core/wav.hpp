#pragma once

#include <filesystem>
#include <vector>

#include "bulbar/core/types.hpp"

namespace bulbar {

/// Reads a RIFF/WAVE file holding 16-bit PCM mono. Samples are scaled by
/// 1/32768.
AudioClip load_audio(const std::filesystem::path& path);
AudioClip decode_wav(const std::vector<char>& bytes, const std::string& name = "<memory>");

/// Encodes as 16-bit PCM mono; samples are rounded and clipped to the
/// int16 range.
std::vector<char> encode_wav(const AudioClip& clip);
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace bulbar
