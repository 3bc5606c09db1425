#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gig {

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_lower(std::string_view s);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over path, so readers never
// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t stable_hash64(std::string_view s, std::uint64_t seed = 0);

std::optional<std::string> env_var(const char* name);

// Splits http(s)://host[:port]/path into scheme-host-port and path.
struct UrlParts {
    std::string origin;
    std::string path;
};
UrlParts split_url(const std::string& url);

} // namespace gig
