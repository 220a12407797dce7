#include "bulbar/core/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(const std::vector<char>& b, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[pos + i]);
    return v;
}

std::uint16_t read_u16(const std::vector<char>& b, std::size_t pos) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                      (static_cast<unsigned char>(b[pos + 1]) << 8));
}

void put_u32(std::vector<char>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::vector<char>& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_tag(std::vector<char>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

}  // namespace

AudioClip decode_wav(const std::vector<char>& bytes, const std::string& name) {
    if (bytes.size() < 12) throw IoError(fmt::format("'{}': truncated WAV header", name));
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw UnsupportedFormatError(fmt::format("'{}': not a RIFF/WAVE file", name));
    }

    struct Format {
        std::uint16_t tag, channels, bits;
        std::uint32_t rate;
    };
    std::optional<Format> format;
    std::optional<std::pair<std::size_t, std::size_t>> data;  // offset, size

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::string id(bytes.data() + pos, 4);
        const std::uint32_t size = read_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        if (id == "fmt ") {
            if (size < 16 || body + 16 > bytes.size()) {
                throw IoError(fmt::format("'{}': truncated fmt chunk", name));
            }
            format = Format{read_u16(bytes, body), read_u16(bytes, body + 2),
                            read_u16(bytes, body + 14), read_u32(bytes, body + 4)};
        } else if (id == "data") {
            if (body + size > bytes.size()) {
                throw IoError(fmt::format("'{}': truncated data chunk ({} of {} bytes)", name,
                                          bytes.size() - body, size));
            }
            data = {{body, size}};
            break;
        }
        pos = body + size + (size & 1u);
    }
    if (!format) throw IoError(fmt::format("'{}': missing fmt chunk", name));
    if (format->tag != kFormatPcm) {
        throw UnsupportedFormatError(
            fmt::format("'{}': unsupported WAV encoding tag {} (PCM required)", name, format->tag));
    }
    if (format->channels != 1) {
        throw UnsupportedFormatError(
            fmt::format("'{}': {} channels (mono required)", name, format->channels));
    }
    if (format->bits != 16) {
        throw UnsupportedFormatError(
            fmt::format("'{}': {}-bit samples (16-bit required)", name, format->bits));
    }
    if (format->rate == 0) throw UnsupportedFormatError(fmt::format("'{}': zero sample rate", name));
    if (!data) throw IoError(fmt::format("'{}': missing data chunk", name));

    AudioClip clip;
    clip.sample_rate = static_cast<int>(format->rate);
    const std::size_t n = data->second / 2;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes, data->first + 2 * i));
        clip.samples[i] = raw / 32768.0;
    }
    return clip;
}

AudioClip load_audio(const std::filesystem::path& path) {
    return decode_wav(read_binary_file(path), path.string());
}

std::vector<char> encode_wav(const AudioClip& clip) {
    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    std::vector<char> b;
    b.reserve(44 + 2 * n);
    put_tag(b, "RIFF");
    put_u32(b, 36 + 2 * n);
    put_tag(b, "WAVE");
    put_tag(b, "fmt ");
    put_u32(b, 16);
    put_u16(b, kFormatPcm);
    put_u16(b, 1);
    put_u32(b, static_cast<std::uint32_t>(clip.sample_rate));
    put_u32(b, static_cast<std::uint32_t>(clip.sample_rate) * 2);
    put_u16(b, 2);
    put_u16(b, 16);
    put_tag(b, "data");
    put_u32(b, 2 * n);
    for (double s : clip.samples) {
        const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
        put_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
    return b;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
    write_binary_file(path, encode_wav(clip));
}

}  // namespace bulbar
