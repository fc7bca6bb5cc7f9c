#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace rbgk {

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partially written file. Creates the
/// parent directory if needed. Throws an io error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

}  // namespace rbgk
