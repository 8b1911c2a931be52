#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sqf {

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Sixteen lowercase hex digits.
std::string to_hex16(std::uint64_t value);
std::uint64_t parse_hex16(std::string_view text);

/// Splits on '\n'; a trailing newline does not produce an empty last line.
std::vector<std::string_view> split_lines(std::string_view text);

/// Parses "key=value" out of a whitespace-separated header line.
std::string header_field(std::string_view line, std::string_view key);
long long header_int(std::string_view line, std::string_view key);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sqf
