#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seeker::java {

// Blanks comments and string/char literal contents (quotes included) while
// preserving the line structure and column positions of everything else.
std::string scrub(std::string_view source);

bool is_control_keyword(const std::string& ident);
bool is_declaration_keyword(const std::string& ident);

// First identifier token of the line, "" if none.
std::string first_ident(std::string_view line);

// All identifier tokens of the line, in order.
std::vector<std::string> idents(std::string_view line);

// Whether `ident` occurs in `line` as a whole word.
bool has_word(std::string_view line, std::string_view ident);

// Index of the line containing the brace matching the one at
// (open_line, open_col) in scrubbed lines; -1 when unbalanced. out_col gets
// the column of the close.
int match_brace(const std::vector<std::string>& scrubbed, int open_line,
                std::size_t open_col, std::size_t& out_col);

// Brace depth at the start of each line (line count + 1 entries; the last is
// the depth after the final line).
std::vector<int> depth_profile(const std::vector<std::string>& scrubbed);

} // namespace seeker::java
