#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace maplabel::detail {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Parse a full token as a double; throws IoError on any trailing garbage.
double parse_double(std::string_view s);

/// Parse a full token as an unsigned integer; throws IoError on failure.
unsigned long long parse_index(std::string_view s);

/// Split on a separator; keeps empty fields.
std::vector<std::string_view> split(std::string_view line, char sep);

/// Read a whole file; throws IoError when the file cannot be opened.
std::string read_file(const std::string& path);

/// Write a whole file with LF endings; throws IoError on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace maplabel::detail
