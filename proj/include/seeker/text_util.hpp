#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace seeker::text {

std::string to_lower(std::string_view s);

// Splits into lowercased alphanumeric word tokens. "file/stream/network"
// yields {"file", "stream", "network"}.
std::vector<std::string> words(std::string_view s);

std::set<std::string> word_set(std::string_view s);

// Jaccard similarity of the lowercased word sets of a and b. Empty vs empty
// is 0.
double jaccard(std::string_view a, std::string_view b);

std::string trim(std::string_view s);

// Collapses runs of spaces/tabs to a single space and strips trailing
// whitespace on every line.
std::string normalize_whitespace(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::string join_lines(const std::vector<std::string>& lines);

bool contains_ci(std::string_view haystack, std::string_view needle);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace seeker::text
