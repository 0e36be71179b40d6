#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tiertune {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_u64(std::string_view text);

/// FNV-1a, used for parameter fingerprints stored next to database records.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace tiertune
