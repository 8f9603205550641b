#include "seeker/java_parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace seeker::java {

std::string scrub(std::string_view source) {
    std::string out;
    out.reserve(source.size());
    enum class State { Normal, LineComment, BlockComment, Str, Chr } state = State::Normal;
    for (std::size_t i = 0; i < source.size(); ++i) {
        char c = source[i];
        char next = i + 1 < source.size() ? source[i + 1] : '\0';
        switch (state) {
        case State::Normal:
            if (c == '/' && next == '/') {
                state = State::LineComment;
                out += "  ";
                ++i;
            } else if (c == '/' && next == '*') {
                state = State::BlockComment;
                out += "  ";
                ++i;
            } else if (c == '"') {
                state = State::Str;
                out.push_back(' ');
            } else if (c == '\'') {
                state = State::Chr;
                out.push_back(' ');
            } else {
                out.push_back(c);
            }
            break;
        case State::LineComment:
            if (c == '\n') {
                state = State::Normal;
                out.push_back('\n');
            } else {
                out.push_back(' ');
            }
            break;
        case State::BlockComment:
            if (c == '*' && next == '/') {
                state = State::Normal;
                out += "  ";
                ++i;
            } else {
                out.push_back(c == '\n' ? '\n' : ' ');
            }
            break;
        case State::Str:
            if (c == '\\' && next != '\0' && next != '\n') {
                out += "  ";
                ++i;
            } else if (c == '"') {
                state = State::Normal;
                out.push_back(' ');
            } else {
                out.push_back(c == '\n' ? '\n' : ' ');
            }
            break;
        case State::Chr:
            if (c == '\\' && next != '\0' && next != '\n') {
                out += "  ";
                ++i;
            } else if (c == '\'') {
                state = State::Normal;
                out.push_back(' ');
            } else {
                out.push_back(c == '\n' ? '\n' : ' ');
            }
            break;
        }
    }
    return out;
}

bool is_control_keyword(const std::string& ident) {
    static const std::set<std::string> kw = {"if",    "else",  "for",    "while", "do",
                                            "switch", "case",  "return", "throw", "try",
                                            "catch",  "finally", "synchronized", "new",
                                            "break",  "continue", "assert", "default"};
    return kw.count(ident) != 0;
}

bool is_declaration_keyword(const std::string& ident) {
    static const std::set<std::string> kw = {"class",   "interface", "enum",   "package",
                                            "import",  "public",    "private", "protected",
                                            "static",  "final",     "abstract", "native",
                                            "volatile", "transient", "record"};
    return kw.count(ident) != 0;
}

std::string first_ident(std::string_view line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
        unsigned char c = line[i];
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            return std::string(line.substr(i, j - i));
        }
        if (!std::isspace(c) && c != '@') return "";
    }
    return "";
}

std::vector<std::string> idents(std::string_view line) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < line.size();) {
        unsigned char c = line[i];
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            out.emplace_back(line.substr(i, j - i));
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

bool has_word(std::string_view line, std::string_view ident) {
    for (std::size_t pos = line.find(ident); pos != std::string_view::npos;
         pos = line.find(ident, pos + 1)) {
        bool left_ok = pos == 0 || (!std::isalnum(static_cast<unsigned char>(line[pos - 1])) &&
                                    line[pos - 1] != '_');
        std::size_t after = pos + ident.size();
        bool right_ok = after >= line.size() ||
                        (!std::isalnum(static_cast<unsigned char>(line[after])) &&
                         line[after] != '_');
        if (left_ok && right_ok) return true;
    }
    return false;
}

int match_brace(const std::vector<std::string>& scrubbed, int open_line,
                std::size_t open_col, std::size_t& out_col) {
    int depth = 0;
    for (std::size_t li = static_cast<std::size_t>(open_line); li < scrubbed.size(); ++li) {
        const std::string& line = scrubbed[li];
        std::size_t start = li == static_cast<std::size_t>(open_line) ? open_col : 0;
        for (std::size_t ci = start; ci < line.size(); ++ci) {
            if (line[ci] == '{') ++depth;
            if (line[ci] == '}') {
                --depth;
                if (depth == 0) {
                    out_col = ci;
                    return static_cast<int>(li);
                }
            }
        }
    }
    return -1;
}

std::vector<int> depth_profile(const std::vector<std::string>& scrubbed) {
    std::vector<int> out;
    out.reserve(scrubbed.size() + 1);
    int depth = 0;
    out.push_back(depth);
    for (const auto& line : scrubbed) {
        for (char c : line) {
            if (c == '{') ++depth;
            if (c == '}') --depth;
        }
        out.push_back(depth);
    }
    return out;
}

} // namespace seeker::java
