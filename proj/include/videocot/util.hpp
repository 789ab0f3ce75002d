#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace videocot {

// ---- string helpers ----

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Case-folds, drops punctuation, collapses whitespace. The normalization used
/// for forgiving answer matching.
std::string normalize_text(std::string_view s);

/// Lower-cased alphanumeric token runs.
std::vector<std::string> tokenize(std::string_view s);

/// Token-overlap F1 between two strings (multiset token counts). 1.0 for equal
/// token bags, 0.0 for no overlap or when either side is empty.
double token_f1(std::string_view a, std::string_view b);

bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Shortest decimal text that round-trips through strtod; integral values
/// print without a fractional part.
std::string format_double(double v);

// ---- hashing ----

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// ---- filesystem ----

std::string read_file(const std::filesystem::path& p);
/// Write via temp file + rename so concurrent readers never observe a torn file.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

}  // namespace videocot
