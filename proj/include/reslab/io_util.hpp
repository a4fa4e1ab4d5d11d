#pragma once

#include <filesystem>
#include <string>

namespace reslab {

/// printf-style fixed notation, locale independent; -0 prints as 0.
std::string format_fixed(double value, int decimals);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace reslab
