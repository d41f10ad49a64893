#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zk/field.hpp"

namespace zk::io {

/// %.17g, which round-trips every double.
std::string format_double(double x);
/// Comma-joined format_double of each value.
std::string join(const std::vector<double>& values);

/// Writes to path.tmp and renames over path. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Header of frame CSV files.
inline constexpr const char* kFrameHeader = "t,i,j,x,y,u";
/// One row per grid point at time t; x/y are lattice positions.
std::string frame_csv_rows(const Field& f, double t);
/// Reads a single-frame CSV written by frame_csv_rows (with header). The box
/// is inferred from the spacing, so both dimensions need at least two points.
/// Throws IoError for unreadable files and DataError for malformed content.
Field read_frame_csv(const std::filesystem::path& path, double* time = nullptr);

}  // namespace zk::io
