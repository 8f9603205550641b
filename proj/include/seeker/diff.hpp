#pragma once

#include <string>

namespace seeker::diffutil {

// Line-based unified diff ("--- old_name", "+++ new_name", @@ hunks with
// `context` lines of context). Empty result when the texts are equal.
std::string unified_diff(const std::string& old_text, const std::string& new_text,
                         const std::string& old_name, const std::string& new_name,
                         int context = 3);

} // namespace seeker::diffutil
