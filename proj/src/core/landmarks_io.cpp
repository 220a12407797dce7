#include "bulbar/core/landmarks_io.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar {

namespace {

struct PartialFrame {
    LandmarkFrame points{};
    std::array<bool, kLandmarkCount> seen{};
    std::size_t count = 0;
};

}  // namespace

LandmarkTrack parse_landmarks(const std::string& text, double frame_rate, const std::string& name) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(fmt::format("'{}': empty landmark file", name));

    const auto header = split_fields(lines[0]);
    const bool has_z = header.size() == 5;
    if (!((header.size() == 4 || has_z) && header[0] == "frame" && header[1] == "idx" &&
          header[2] == "x" && header[3] == "y" && (!has_z || header[4] == "z"))) {
        throw ParseError(fmt::format("'{}': line 1: expected header 'frame,idx,x,y[,z]', got '{}'",
                                     name, lines[0]));
    }

    std::map<long long, PartialFrame> frames;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const std::string ctx = fmt::format("'{}': line {}", name, ln + 1);
        const auto f = split_fields(lines[ln]);
        if (f.size() != header.size()) {
            throw ParseError(fmt::format("{}: expected {} fields, got {}", ctx, header.size(), f.size()));
        }
        const long long frame = parse_int(f[0], ctx + " (frame)");
        const long long idx = parse_int(f[1], ctx + " (idx)");
        if (frame < 0) throw ValidationError(fmt::format("{}: negative frame index", ctx));
        if (idx < 0 || idx >= static_cast<long long>(kLandmarkCount)) {
            throw ValidationError(fmt::format("{}: landmark index {} outside [0,67]", ctx, idx));
        }
        Point3 p{parse_double(f[2], ctx + " (x)"), parse_double(f[3], ctx + " (y)"),
                 has_z ? parse_double(f[4], ctx + " (z)") : 0.0};
        for (double c : p) {
            if (!std::isfinite(c)) {
                throw ValidationError(fmt::format("{}: non-finite coordinate in frame {}", ctx, frame));
            }
        }
        auto& pf = frames[frame];
        if (pf.seen[idx]) {
            throw ValidationError(
                fmt::format("{}: landmark {} repeated in frame {}", ctx, idx, frame));
        }
        pf.seen[idx] = true;
        pf.points[idx] = p;
        ++pf.count;
    }

    LandmarkTrack track;
    track.frame_rate = frame_rate;
    long long expected = 0;
    for (auto& [frame, pf] : frames) {
        if (frame != expected) {
            throw ValidationError(fmt::format(
                "'{}': frame indices must be consecutive from 0; frame {} missing", name, expected));
        }
        if (pf.count != kLandmarkCount) {
            throw ValidationError(fmt::format("'{}': frame {} has {} points (expected {})", name,
                                              frame, pf.count, kLandmarkCount));
        }
        track.frames.push_back(pf.points);
        ++expected;
    }
    if (!(frame_rate > 0.0)) {
        throw ValidationError(fmt::format("'{}': frame rate must be positive", name));
    }
    return track;
}

LandmarkTrack load_landmarks(const std::filesystem::path& path, double frame_rate) {
    return parse_landmarks(read_text_file(path), frame_rate, path.string());
}

std::string format_landmarks(const LandmarkTrack& track) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "frame,idx,x,y,z\n");
    for (std::size_t f = 0; f < track.frames.size(); ++f) {
        for (std::size_t i = 0; i < kLandmarkCount; ++i) {
            const auto& p = track.frames[f][i];
            fmt::format_to(std::back_inserter(buf), "{},{},{:.4f},{:.4f},{:.4f}\n", f, i, p[0], p[1],
                           p[2]);
        }
    }
    return fmt::to_string(buf);
}

void write_landmarks(const LandmarkTrack& track, const std::filesystem::path& path) {
    write_text_file(path, format_landmarks(track));
}

}  // namespace bulbar
