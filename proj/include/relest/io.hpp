#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace relest {

/// Round-trip decimal form ("%.17g"), locale independent.
std::string format_real(double value);

/// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

/// Writes to "<path>.tmp" and renames over path, creating parent
/// directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace relest
