#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tlab::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Non-empty lines with '#' comments and trailing CR stripped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

// Shortest round-trippable text for a double ("%.17g" trimmed).
std::string format_double(double value);

}  // namespace tlab::io
