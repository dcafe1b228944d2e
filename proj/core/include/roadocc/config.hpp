#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roadocc {

/// Reads "key = value" lines. '#' starts a comment; blank lines are
/// ignored. Keys may be written with or without a leading "--".
/// Throws ParseError on lines without '='.
std::vector<std::pair<std::string, std::string>> parse_key_value(std::string_view text);
std::vector<std::pair<std::string, std::string>> load_key_value(
    const std::filesystem::path& path);

/// Splits on commas, trimming whitespace and dropping empty items.
std::vector<std::string> split_list(std::string_view text);

}  // namespace roadocc
