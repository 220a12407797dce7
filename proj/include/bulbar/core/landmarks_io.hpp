#pragma once

#include <filesystem>
#include <string>

#include "bulbar/core/types.hpp"

namespace bulbar {

/// Reads a landmark CSV with header `frame,idx,x,y[,z]` (68 rows per frame,
/// 0-based consecutive frame indices). A missing z column yields z = 0.
LandmarkTrack load_landmarks(const std::filesystem::path& path, double frame_rate);
LandmarkTrack parse_landmarks(const std::string& text, double frame_rate,
                              const std::string& name = "<memory>");

std::string format_landmarks(const LandmarkTrack& track);
void write_landmarks(const LandmarkTrack& track, const std::filesystem::path& path);

}  // namespace bulbar
