#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gist::detail {

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s) noexcept;
// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_char(std::string_view s, char sep);
std::vector<std::string_view> split_lines(std::string_view s);

// Throws IoError naming `what` when the file cannot be read.
std::string read_file(const std::filesystem::path& path, std::string_view what = "file");

bool parse_double(std::string_view s, double& out) noexcept;
bool parse_float(std::string_view s, float& out) noexcept;

}  // namespace gist::detail
