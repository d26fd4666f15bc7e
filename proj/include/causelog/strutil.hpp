#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace causelog {

std::string_view trim_view(std::string_view s);
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool contains_digit(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Replaces invalid UTF-8 byte sequences with U+FFFD.
std::string utf8_sanitize(std::string_view s);

// Shell-style filename matching with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view name);

}  // namespace causelog
