#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vulncluster::util {

/// Double formatted with %.12g, the fixed width used by all CSV outputs.
std::string format_g12(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// FNV-1a 64-bit over a byte sequence.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ull);

/// Content hash of a file, or of every *.json file under a directory in
/// sorted relative-path order (path and bytes both folded in). Hex string.
std::string hash_input(const std::filesystem::path& source);

/// Minimal RFC-4180-style CSV: quotes a field only when needed.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split_line(std::string_view line);
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

/// UTC timestamp, e.g. "2026-08-25T12:00:00Z".
std::string utc_timestamp();

}  // namespace vulncluster::util
