#include "seeker/diff.hpp"

#include "seeker/text_util.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace seeker::diffutil {

namespace {

enum class EditKind { Keep, Del, Ins };

struct Edit {
    EditKind kind;
    std::size_t a_index = 0; // valid for Keep/Del
    std::size_t b_index = 0; // valid for Keep/Ins
};

// Classic LCS table; inputs here are file-sized (a few thousand lines).
std::vector<Edit> edit_script(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                                     : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    std::vector<Edit> out;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j]) {
            out.push_back({EditKind::Keep, i++, j++});
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            out.push_back({EditKind::Del, i++, 0});
        } else {
            out.push_back({EditKind::Ins, 0, j++});
        }
    }
    while (i < n) out.push_back({EditKind::Del, i++, 0});
    while (j < m) out.push_back({EditKind::Ins, 0, j++});
    return out;
}

} // namespace

std::string unified_diff(const std::string& old_text, const std::string& new_text,
                         const std::string& old_name, const std::string& new_name,
                         int context) {
    if (old_text == new_text) return "";
    if (context < 0) context = 0;
    auto a = text::split_lines(old_text);
    auto b = text::split_lines(new_text);
    auto script = edit_script(a, b);

    // Hunks: maximal change runs padded with `context` lines of kept context.
    struct Hunk {
        std::size_t begin, end; // half-open range into `script`
    };
    std::vector<Hunk> hunks;
    std::size_t idx = 0;
    while (idx < script.size()) {
        if (script[idx].kind == EditKind::Keep) {
            ++idx;
            continue;
        }
        std::size_t start = idx >= static_cast<std::size_t>(context)
                                ? idx - static_cast<std::size_t>(context)
                                : 0;
        std::size_t end = idx;
        std::size_t kept = 0;
        // extend while within 2*context kept lines of the next change
        for (std::size_t k = idx; k < script.size(); ++k) {
            if (script[k].kind == EditKind::Keep) {
                if (++kept > 2 * static_cast<std::size_t>(context)) break;
            } else {
                kept = 0;
                end = k + 1;
            }
        }
        std::size_t padded_end =
            std::min(script.size(), end + static_cast<std::size_t>(context));
        if (!hunks.empty() && start <= hunks.back().end) {
            hunks.back().end = padded_end;
        } else {
            hunks.push_back({start, padded_end});
        }
        idx = end;
    }

    std::ostringstream out;
    out << "--- " << old_name << "\n+++ " << new_name << "\n";
    for (const auto& h : hunks) {
        std::size_t a_start = a.size(), b_start = b.size();
        std::size_t a_count = 0, b_count = 0;
        for (std::size_t k = h.begin; k < h.end; ++k) {
            const auto& e = script[k];
            if (e.kind != EditKind::Ins) {
                a_start = std::min(a_start, e.a_index);
                ++a_count;
            }
            if (e.kind != EditKind::Del) {
                b_start = std::min(b_start, e.b_index);
                ++b_count;
            }
        }
        out << "@@ -" << (a_count == 0 ? a_start : a_start + 1) << "," << a_count
            << " +" << (b_count == 0 ? b_start : b_start + 1) << "," << b_count
            << " @@\n";
        for (std::size_t k = h.begin; k < h.end; ++k) {
            const auto& e = script[k];
            switch (e.kind) {
            case EditKind::Keep: out << ' ' << a[e.a_index] << "\n"; break;
            case EditKind::Del: out << '-' << a[e.a_index] << "\n"; break;
            case EditKind::Ins: out << '+' << b[e.b_index] << "\n"; break;
            }
        }
    }
    return out.str();
}

} // namespace seeker::diffutil
