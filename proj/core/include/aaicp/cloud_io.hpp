#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

#include "aaicp/point_cloud.hpp"

namespace aaicp {

enum class CloudFormat { PlyAscii, Xyz };

/// Guesses the format from the file extension (.ply / .xyz / .txt).
std::optional<CloudFormat> format_from_path(const std::filesystem::path& path);

// Readers throw ParseError (with a 1-based line number) on malformed input and
// std::runtime_error when the file cannot be opened.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud read_ply_ascii(std::istream& in);
PointCloud read_xyz(std::istream& in);

// Writers emit the shortest decimal form that parses back to the same double,
// so load_cloud(write_cloud(c)) == c bit for bit. Empty clouds are rejected.
void write_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);
void write_ply_ascii(const PointCloud& cloud, std::ostream& out);
void write_xyz(const PointCloud& cloud, std::ostream& out);

}  // namespace aaicp
