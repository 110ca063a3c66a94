#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace bstar {

/// Shortest decimal text that round-trips the double ('.' decimal point).
std::string format_double(double value);

/// Writes `contents` to `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bstar
