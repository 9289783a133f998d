#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fjmgt {

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Writes to a temporary sibling and renames it over `path`, so readers never
/// see a partial file. Creates missing parent directories.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace fjmgt
