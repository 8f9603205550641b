#include "seeker/code_model.hpp"

#include "seeker/errors.hpp"
#include "seeker/java_parser.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

using seeker::java::depth_profile;
using seeker::java::first_ident;
using seeker::java::has_word;
using seeker::java::idents;
using seeker::java::is_control_keyword;
using seeker::java::is_declaration_keyword;
using seeker::java::match_brace;
using seeker::java::scrub;

namespace seeker::code {

namespace {

bool has_top_level_type(const std::vector<std::string>& scrubbed) {
    int depth = 0;
    for (const auto& line : scrubbed) {
        if (depth == 0) {
            for (const auto& id : idents(line))
                if (id == "class" || id == "interface" || id == "enum" || id == "record")
                    return true;
        }
        for (char c : line) {
            if (c == '{') ++depth;
            if (c == '}') --depth;
        }
    }
    return false;
}

// A normalized view of a source fragment: possibly preceded by a synthetic
// "class __Pre {" line and/or followed by synthetic closers so braces balance
// and a type wrapper exists. Emitted line numbers refer to the original
// fragment (1-based).
struct Normalized {
    std::vector<std::string> orig;  // includes synthetic lines
    std::vector<std::string> lines; // scrubbed, same shape
    int pre = 0;                    // synthetic lines prepended
    int orig_count = 0;             // real lines of the fragment

    int to_source(int idx0) const { return idx0 - pre + 1; } // 0-based idx -> 1-based line
    bool synthetic(int idx0) const {
        return idx0 < pre || idx0 >= pre + orig_count;
    }
};

Normalized normalize(const std::string& source) {
    Normalized n;
    n.orig = text::split_lines(source);
    n.orig_count = static_cast<int>(n.orig.size());
    std::string scrubbed_all = scrub(source);
    auto scrubbed = text::split_lines(scrubbed_all);
    scrubbed.resize(n.orig.size());

    int depth = 0, min_depth = 0;
    for (const auto& line : scrubbed)
        for (char c : line) {
            if (c == '{') ++depth;
            if (c == '}') --depth;
            min_depth = std::min(min_depth, depth);
        }

    std::vector<std::string> pre_lines;
    for (int i = 0; i < -min_depth; ++i) pre_lines.push_back("class __Pre {");
    bool wrap = pre_lines.empty() && !has_top_level_type(scrubbed);
    if (wrap) pre_lines.push_back("class __Unit {");

    int total = depth - min_depth + (wrap ? 1 : 0);

    n.pre = static_cast<int>(pre_lines.size());
    std::vector<std::string> orig2 = pre_lines, scrub2 = pre_lines;
    orig2.insert(orig2.end(), n.orig.begin(), n.orig.end());
    scrub2.insert(scrub2.end(), scrubbed.begin(), scrubbed.end());
    for (int i = 0; i < total; ++i) {
        orig2.push_back("}");
        scrub2.push_back("}");
    }
    n.orig = std::move(orig2);
    n.lines = std::move(scrub2);
    return n;
}

// Body-content span for a brace pair: excludes the brace lines themselves
// unless they carry statement text.
LineSpan body_span(const Normalized& n, int open_idx, std::size_t open_col, int close_idx,
                   std::size_t close_col) {
    auto nonspace = [](const std::string& s, std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to && i < s.size(); ++i)
            if (!std::isspace(static_cast<unsigned char>(s[i]))) return true;
        return false;
    };
    int start = nonspace(n.lines[open_idx], open_col + 1, n.lines[open_idx].size())
                    ? open_idx
                    : open_idx + 1;
    int end = nonspace(n.lines[close_idx], 0, close_col) ? close_idx : close_idx - 1;
    LineSpan s;
    s.start = n.to_source(start);
    s.end = n.to_source(end);
    return s;
}

// Splits "A | B" or "A, B" type lists into identifiers, dropping the trailing
// variable name when present.
std::vector<std::string> catch_types(const std::string& paren_content) {
    auto ids = idents(paren_content);
    if (ids.size() > 1) ids.pop_back(); // variable name
    std::vector<std::string> out;
    for (auto& id : ids)
        if (!id.empty() && std::isupper(static_cast<unsigned char>(id[0])))
            out.push_back(id);
    if (out.empty() && !ids.empty()) out = ids;
    return out;
}

struct HeaderScan {
    bool ok = false;
    std::string name;
    int param_count = 0;
    std::vector<std::string> declared_throws;
    int brace_idx = 0;
    std::size_t brace_col = 0;
};

// Tries to read a method header starting at line idx of n.lines.
HeaderScan scan_method_header(const Normalized& n, int idx) {
    HeaderScan h;
    std::string joined;
    std::vector<std::pair<int, std::size_t>> offsets; // (line idx, start col in joined)
    int last = std::min<int>(idx + 5, static_cast<int>(n.lines.size()) - 1);
    for (int j = idx; j <= last; ++j) {
        offsets.emplace_back(j, joined.size());
        joined += n.lines[j];
        joined.push_back('\n');
        if (n.lines[j].find('{') != std::string::npos ||
            n.lines[j].find(';') != std::string::npos)
            break;
    }
    auto brace = joined.find('{');
    auto semi = joined.find(';');
    if (brace == std::string::npos) return h;
    if (semi != std::string::npos && semi < brace) return h;

    auto open = joined.find('(');
    if (open == std::string::npos || open > brace) return h;
    // identifier immediately before '('
    std::size_t e = open;
    while (e > 0 && std::isspace(static_cast<unsigned char>(joined[e - 1]))) --e;
    std::size_t b = e;
    while (b > 0 && (std::isalnum(static_cast<unsigned char>(joined[b - 1])) ||
                     joined[b - 1] == '_'))
        --b;
    if (b == e) return h;
    h.name = joined.substr(b, e - b);
    if (is_control_keyword(h.name)) return h;

    // matching ')'
    int pd = 0;
    std::size_t close = std::string::npos;
    for (std::size_t i = open; i < brace; ++i) {
        if (joined[i] == '(') ++pd;
        if (joined[i] == ')') {
            --pd;
            if (pd == 0) {
                close = i;
                break;
            }
        }
    }
    if (close == std::string::npos) return h;

    std::string params = joined.substr(open + 1, close - open - 1);
    if (!text::trim(params).empty()) {
        int depth = 0, count = 1;
        for (char c : params) {
            if (c == '(' || c == '<' || c == '[') ++depth;
            if (c == ')' || c == '>' || c == ']') --depth;
            if (c == ',' && depth == 0) ++count;
        }
        h.param_count = count;
    }

    std::string tail = joined.substr(close + 1, brace - close - 1);
    auto tail_ids = idents(tail);
    for (std::size_t i = 0; i < tail_ids.size(); ++i)
        if (tail_ids[i] == "throws") {
            for (std::size_t j = i + 1; j < tail_ids.size(); ++j)
                h.declared_throws.push_back(tail_ids[j]);
            break;
        }

    // locate the '{' in line coordinates
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        std::size_t start = offsets[k].second;
        std::size_t end = k + 1 < offsets.size() ? offsets[k + 1].second : joined.size();
        if (brace >= start && brace < end) {
            h.brace_idx = offsets[k].first;
            h.brace_col = brace - start;
            break;
        }
    }
    h.ok = true;
    return h;
}

void scan_try_blocks(const Normalized& n, ParseResult& out) {
    for (int i = 0; i < static_cast<int>(n.lines.size()); ++i) {
        const std::string& line = n.lines[i];
        if (!has_word(line, "try")) continue;
        if (first_ident(text::trim(line)) != "try" &&
            text::trim(line).rfind("} try", 0) != 0)
            continue;
        auto brace = line.find('{', line.find("try"));
        if (brace == std::string::npos) continue;
        std::size_t close_col = 0;
        int close_idx = match_brace(n.lines, i, brace, close_col);
        if (close_idx < 0) {
            out.diagnostics.push_back("unbalanced try block at line " +
                                      std::to_string(n.to_source(i)));
            continue;
        }
        TryBlock tb;
        tb.try_line = n.to_source(i);
        tb.try_span = body_span(n, i, brace, close_idx, close_col);

        int cur = close_idx;
        std::size_t col = close_col;
        while (true) {
            std::string rest = n.lines[cur].substr(col + 1);
            std::string fi = first_ident(rest);
            if (fi == "catch") {
                auto po = n.lines[cur].find('(', col + 1);
                auto pc = n.lines[cur].find(')', po == std::string::npos ? col + 1 : po);
                auto cb = n.lines[cur].find('{', pc == std::string::npos ? col + 1 : pc);
                if (po == std::string::npos || pc == std::string::npos ||
                    cb == std::string::npos) {
                    out.diagnostics.push_back("malformed catch clause at line " +
                                              std::to_string(n.to_source(cur)));
                    break;
                }
                std::size_t hc = 0;
                int hidx = match_brace(n.lines, cur, cb, hc);
                if (hidx < 0) break;
                auto types = catch_types(n.lines[cur].substr(po + 1, pc - po - 1));
                LineSpan hs = body_span(n, cur, cb, hidx, hc);
                for (const auto& t : types) {
                    CatchClause cc;
                    cc.exception = t;
                    cc.handler_span = hs;
                    cc.clause_line = n.to_source(cur);
                    tb.catch_clauses.push_back(cc);
                }
                cur = hidx;
                col = hc;
            } else if (fi == "finally") {
                auto fb = n.lines[cur].find('{', col + 1);
                if (fb == std::string::npos) break;
                std::size_t fc = 0;
                int fidx = match_brace(n.lines, cur, fb, fc);
                if (fidx < 0) break;
                tb.finally_line = n.to_source(cur);
                tb.finally_span = body_span(n, cur, fb, fidx, fc);
                cur = fidx;
                col = fc;
            } else {
                break;
            }
        }
        tb.close_line = n.to_source(cur);
        if (tb.catch_clauses.empty() && !tb.finally_span)
            out.diagnostics.push_back("try without catch or finally at line " +
                                      std::to_string(tb.try_line));
        out.try_blocks.push_back(tb);
    }
}

void scan_sites(const Normalized& n, const std::vector<std::pair<int, int>>& header_ranges,
                ParseResult& out) {
    auto in_header = [&](int src_line) {
        for (auto [a, b] : header_ranges)
            if (src_line >= a && src_line <= b) return true;
        return false;
    };
    for (int i = 0; i < static_cast<int>(n.lines.size()); ++i) {
        if (n.synthetic(i)) continue;
        int src = n.to_source(i);
        const std::string& line = n.lines[i];
        std::string trimmed = text::trim(line);
        std::string fi = first_ident(trimmed);

        if (fi == "throw") {
            auto ids = idents(trimmed);
            ThrowSite ts;
            ts.line = src;
            if (ids.size() >= 3 && ids[1] == "new") ts.exception = ids[2];
            out.throw_sites.push_back(ts);
            continue;
        }
        if (in_header(src)) continue;
        if (fi == "package" || fi == "import") continue;
        if (fi == "class" || fi == "interface" || fi == "enum") continue;

        std::set<std::string> seen;
        for (std::size_t p = line.find('('); p != std::string::npos;
             p = line.find('(', p + 1)) {
            std::size_t e = p;
            while (e > 0 && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
            std::size_t b = e;
            while (b > 0 && (std::isalnum(static_cast<unsigned char>(line[b - 1])) ||
                             line[b - 1] == '_'))
                --b;
            if (b == e) continue;
            std::string callee = line.substr(b, e - b);
            if (is_control_keyword(callee) || is_declaration_keyword(callee)) continue;
            if (!seen.insert(callee).second) continue;
            CallSite cs;
            cs.line = src;
            cs.callee = callee;
            cs.text = n.orig[i];
            out.call_sites.push_back(cs);
        }
    }
}

// ---------------------------------------------------------------------------
// statement tree for the CFG

struct Stmt {
    enum class Kind { Simple, If, Loop, Try, Opaque } kind = Kind::Simple;
    int line = 0;
    std::vector<Stmt> body;          // then-block / loop body / try body
    std::vector<Stmt> else_body;
    bool has_else = false;
    struct Catch {
        int line = 0;
        std::string label;
        std::vector<Stmt> handler;
    };
    std::vector<Catch> catches;
    std::vector<Stmt> finally_body;
    bool has_finally = false;
};

struct StmtParser {
    const Normalized& n;
    const ParseResult& parsed;

    int idx(int src_line) const { return src_line - 1 + n.pre; }

    std::vector<Stmt> parse_block(LineSpan span) {
        std::vector<Stmt> out;
        int i = span.start;
        while (i <= span.end) {
            auto [stmt, next, ok] = parse_one(i, span.end);
            if (ok) out.push_back(std::move(stmt));
            i = next;
        }
        return out;
    }

    std::tuple<Stmt, int, bool> parse_one(int src_line, int limit) {
        const std::string& line = n.lines[idx(src_line)];
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed == "{" || trimmed == "}" ||
            (trimmed.rfind("}", 0) == 0 && trimmed.size() <= 2))
            return {Stmt{}, src_line + 1, false};
        std::string fi = first_ident(trimmed);

        if (fi == "if") return parse_if(src_line, limit);
        if (fi == "for" || fi == "while") return parse_loop(src_line, limit);
        if (fi == "do") return parse_do(src_line);
        if (fi == "try") return parse_try(src_line);
        if (fi == "switch" || fi == "synchronized") return parse_opaque(src_line);

        Stmt s;
        s.kind = Stmt::Kind::Simple;
        s.line = src_line;
        return {s, src_line + 1, true};
    }

    std::tuple<Stmt, int, bool> parse_if(int src_line, int limit) {
        Stmt s;
        s.kind = Stmt::Kind::If;
        s.line = src_line;
        int i = idx(src_line);
        auto brace = n.lines[i].find('{');
        int next;
        if (brace != std::string::npos) {
            std::size_t cc = 0;
            int ci = match_brace(n.lines, i, brace, cc);
            if (ci < 0) return {s, src_line + 1, true};
            s.body = parse_block(body_span(n, i, brace, ci, cc));
            // `} else {` or `} else if (...) {` on the closing line
            std::string rest = n.lines[ci].substr(cc + 1);
            if (first_ident(rest) == "else") {
                s.has_else = true;
                auto eids = idents(rest);
                if (eids.size() >= 2 && eids[1] == "if") {
                    auto [inner, in_next, ok] = parse_if(n.to_source(ci), limit);
                    if (ok) s.else_body.push_back(std::move(inner));
                    next = in_next;
                    return {s, next, true};
                }
                auto eb = n.lines[ci].find('{', cc + 1);
                if (eb != std::string::npos) {
                    std::size_t ec = 0;
                    int ei = match_brace(n.lines, ci, eb, ec);
                    if (ei >= 0) {
                        s.else_body = parse_block(body_span(n, ci, eb, ei, ec));
                        return {s, n.to_source(ei) + 1, true};
                    }
                }
            }
            return {s, n.to_source(ci) + 1, true};
        }
        // braceless: the next statement is the then-branch
        auto [inner, in_next, ok] = parse_one(src_line + 1, limit);
        if (ok) s.body.push_back(std::move(inner));
        return {s, in_next, true};
    }

    std::tuple<Stmt, int, bool> parse_loop(int src_line, int limit) {
        Stmt s;
        s.kind = Stmt::Kind::Loop;
        s.line = src_line;
        int i = idx(src_line);
        auto brace = n.lines[i].find('{');
        if (brace != std::string::npos) {
            std::size_t cc = 0;
            int ci = match_brace(n.lines, i, brace, cc);
            if (ci < 0) return {s, src_line + 1, true};
            s.body = parse_block(body_span(n, i, brace, ci, cc));
            return {s, n.to_source(ci) + 1, true};
        }
        auto [inner, in_next, ok] = parse_one(src_line + 1, limit);
        if (ok) s.body.push_back(std::move(inner));
        return {s, in_next, true};
    }

    std::tuple<Stmt, int, bool> parse_do(int src_line) {
        Stmt s;
        s.kind = Stmt::Kind::Loop;
        s.line = src_line;
        int i = idx(src_line);
        auto brace = n.lines[i].find('{');
        if (brace == std::string::npos) return {s, src_line + 1, true};
        std::size_t cc = 0;
        int ci = match_brace(n.lines, i, brace, cc);
        if (ci < 0) return {s, src_line + 1, true};
        s.body = parse_block(body_span(n, i, brace, ci, cc));
        return {s, n.to_source(ci) + 1, true}; // `} while (...)` shares the close line
    }

    std::tuple<Stmt, int, bool> parse_try(int src_line) {
        Stmt s;
        s.kind = Stmt::Kind::Try;
        s.line = src_line;
        const TryBlock* tb = nullptr;
        for (const auto& t : parsed.try_blocks)
            if (t.try_line == src_line) tb = &t;
        if (!tb) return {s, src_line + 1, true};
        s.body = parse_block(tb->try_span);
        // clauses sharing a handler span collapse into one catch head
        std::map<int, Stmt::Catch> heads;
        for (const auto& cc : tb->catch_clauses) {
            auto& head = heads[cc.clause_line];
            head.line = cc.clause_line;
            head.label = head.label.empty() ? cc.exception : head.label + "|" + cc.exception;
            if (head.handler.empty()) head.handler = parse_block(cc.handler_span);
        }
        for (auto& [line, head] : heads) s.catches.push_back(std::move(head));
        if (tb->finally_span) {
            s.has_finally = true;
            s.finally_body = parse_block(*tb->finally_span);
        }
        return {s, tb->close_line + 1, true};
    }

    std::tuple<Stmt, int, bool> parse_opaque(int src_line) {
        Stmt s;
        s.kind = Stmt::Kind::Opaque;
        s.line = src_line;
        int i = idx(src_line);
        auto brace = n.lines[i].find('{');
        if (brace == std::string::npos) return {s, src_line + 1, true};
        std::size_t cc = 0;
        int ci = match_brace(n.lines, i, brace, cc);
        if (ci < 0) return {s, src_line + 1, true};
        return {s, n.to_source(ci) + 1, true};
    }
};

struct CfgBuilder {
    Cfg cfg;

    int add_node(int line, const std::string& kind) {
        int id = static_cast<int>(cfg.nodes.size());
        cfg.nodes.push_back({id, line, kind});
        return id;
    }
    void edge(int a, int b) { cfg.edges.emplace_back(a, b); }

    struct Flow {
        int entry = -1;
        std::vector<int> exits;
    };

    Flow build_seq(const std::vector<Stmt>& stmts) {
        Flow flow;
        std::vector<int> pending;
        for (const auto& s : stmts) {
            Flow f = build_stmt(s);
            if (f.entry < 0) continue;
            if (flow.entry < 0) flow.entry = f.entry;
            for (int x : pending) edge(x, f.entry);
            pending = f.exits;
        }
        flow.exits = pending;
        return flow;
    }

    Flow build_stmt(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::Simple:
        case Stmt::Kind::Opaque: {
            int id = add_node(s.line, "stmt");
            return {id, {id}};
        }
        case Stmt::Kind::If: {
            int id = add_node(s.line, "branch");
            Flow flow;
            flow.entry = id;
            Flow then = build_seq(s.body);
            if (then.entry >= 0) {
                edge(id, then.entry);
                flow.exits.insert(flow.exits.end(), then.exits.begin(), then.exits.end());
            } else {
                flow.exits.push_back(id);
            }
            if (s.has_else) {
                Flow els = build_seq(s.else_body);
                if (els.entry >= 0) {
                    edge(id, els.entry);
                    flow.exits.insert(flow.exits.end(), els.exits.begin(), els.exits.end());
                } else {
                    flow.exits.push_back(id);
                }
            } else {
                flow.exits.push_back(id);
            }
            return flow;
        }
        case Stmt::Kind::Loop: {
            int id = add_node(s.line, "loop");
            Flow body = build_seq(s.body);
            if (body.entry >= 0) {
                edge(id, body.entry);
                for (int x : body.exits) edge(x, id); // back edge
            }
            return {id, {id}};
        }
        case Stmt::Kind::Try: {
            std::size_t before = cfg.nodes.size();
            Flow body = build_seq(s.body);
            std::vector<int> body_nodes;
            for (std::size_t i = before; i < cfg.nodes.size(); ++i)
                body_nodes.push_back(static_cast<int>(i));

            Flow flow;
            flow.entry = body.entry;
            std::vector<int> exits = body.exits;
            for (const auto& c : s.catches) {
                int cid = add_node(c.line, "catch");
                for (int b : body_nodes) edge(b, cid);
                if (flow.entry < 0) flow.entry = cid;
                Flow h = build_seq(c.handler);
                if (h.entry >= 0) {
                    edge(cid, h.entry);
                    exits.insert(exits.end(), h.exits.begin(), h.exits.end());
                } else {
                    exits.push_back(cid);
                }
            }
            if (s.has_finally) {
                Flow fin = build_seq(s.finally_body);
                if (fin.entry >= 0) {
                    for (int x : exits) edge(x, fin.entry);
                    if (flow.entry < 0) flow.entry = fin.entry;
                    exits = fin.exits;
                }
            }
            flow.exits = exits;
            return flow;
        }
        }
        return {};
    }
};

} // namespace

KnownThrows KnownThrows::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("known-throws table " + path + ": " + e.what());
    }
    KnownThrows k;
    for (const auto& e : doc.at("entries"))
        k.entries_.emplace_back(text::to_lower(e.at("match").get<std::string>()),
                                e.at("exception").get<std::string>());
    return k;
}

std::vector<std::string> KnownThrows::match(const std::string& line) const {
    std::string lower = text::to_lower(line);
    std::vector<std::string> out;
    for (const auto& [pattern, type] : entries_)
        if (lower.find(pattern) != std::string::npos) out.push_back(type);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ParseResult parse_source(const std::string& source) {
    ParseResult out;
    Normalized n = normalize(source);

    auto depths = depth_profile(n.lines);
    long paren_delta = 0;
    for (const auto& line : n.lines)
        for (char c : line) {
            if (c == '(') ++paren_delta;
            if (c == ')') --paren_delta;
        }
    if (depths.back() != 0 || paren_delta != 0) {
        out.degraded = true;
        out.diagnostics.push_back("unbalanced braces or parentheses; structural analysis skipped");
        return out;
    }

    std::vector<std::pair<int, int>> header_ranges;
    for (int i = 0; i < static_cast<int>(n.lines.size()); ++i) {
        if (depths[i] != 1) continue;
        std::string fi = first_ident(text::trim(n.lines[i]));
        if (fi.empty() || is_control_keyword(fi)) continue;
        if (fi == "package" || fi == "import" || fi == "class" || fi == "interface" ||
            fi == "enum")
            continue;
        HeaderScan h = scan_method_header(n, i);
        if (!h.ok) continue;
        std::size_t cc = 0;
        int ci = match_brace(n.lines, h.brace_idx, h.brace_col, cc);
        if (ci < 0) continue;
        MethodDecl m;
        m.name = h.name;
        m.param_count = h.param_count;
        m.declared_throws = h.declared_throws;
        m.decl_span = {n.to_source(i), n.to_source(ci)};
        m.body_span = body_span(n, h.brace_idx, h.brace_col, ci, cc);
        out.methods.push_back(m);
        header_ranges.emplace_back(n.to_source(i), n.to_source(h.brace_idx));
        i = h.brace_idx; // continue inside the body for try scanning later
    }

    scan_try_blocks(n, out);
    scan_sites(n, header_ranges, out);
    return out;
}

ParseResult parse_unit(const CodeUnit& unit) { return parse_source(unit.source); }

std::vector<CodeUnit> segment(const Codebase& codebase, int max_unit_lines) {
    if (max_unit_lines < 1) throw config_error("max_unit_lines must be positive");
    std::vector<CodeUnit> units;
    for (const auto& file : codebase.files) {
        auto lines = text::split_lines(file.content);
        while (!lines.empty() && lines.back().empty()) lines.pop_back();
        if (lines.empty()) continue;
        int total = static_cast<int>(lines.size());

        ParseResult parsed = parse_source(file.content);
        int counter = 0;
        auto emit = [&](int start, int end, bool is_method_group, int method_count,
                        std::vector<std::string> diags) {
            CodeUnit u;
            u.unit_id = file.path + "#u" + std::to_string(++counter);
            u.file = file.path;
            u.span = {start, end};
            std::vector<std::string> slice(lines.begin() + start - 1, lines.begin() + end);
            u.source = text::join_lines(slice);
            u.diagnostics = std::move(diags);
            if (parsed.degraded) {
                u.kind = CodeUnit::Kind::FileBlock;
                u.degraded = true;
            } else if (method_count == 1 && is_method_group) {
                u.kind = CodeUnit::Kind::FunctionBlock;
            } else if (method_count >= 1) {
                u.kind = CodeUnit::Kind::ClassBlock;
            } else {
                u.kind = CodeUnit::Kind::FileBlock;
            }
            units.push_back(std::move(u));
        };

        if (parsed.degraded) {
            emit(1, total, false, 0, parsed.diagnostics);
            continue;
        }

        // atoms: method spans plus the gaps between them
        struct Atom {
            LineSpan span;
            bool method = false;
        };
        std::vector<MethodDecl> methods = parsed.methods;
        std::sort(methods.begin(), methods.end(), [](const auto& a, const auto& b) {
            return a.decl_span.start < b.decl_span.start;
        });
        std::vector<Atom> atoms;
        int cursor = 1;
        for (const auto& m : methods) {
            if (m.decl_span.start > cursor)
                atoms.push_back({{cursor, m.decl_span.start - 1}, false});
            atoms.push_back({{m.decl_span.start, m.decl_span.end}, true});
            cursor = m.decl_span.end + 1;
        }
        if (cursor <= total) atoms.push_back({{cursor, total}, false});

        // gap atoms longer than the limit are split; method atoms never are
        std::vector<Atom> sized;
        for (const auto& a : atoms) {
            if (a.method || a.span.lines() <= max_unit_lines) {
                sized.push_back(a);
            } else {
                for (int s = a.span.start; s <= a.span.end; s += max_unit_lines)
                    sized.push_back(
                        {{s, std::min(a.span.end, s + max_unit_lines - 1)}, false});
            }
        }

        int start = 0, end = 0, methods_in = 0;
        bool open = false;
        auto flush = [&](std::vector<std::string> diags = {}) {
            if (!open) return;
            emit(start, end, methods_in >= 1, methods_in, std::move(diags));
            open = false;
            methods_in = 0;
        };
        for (const auto& a : sized) {
            int alines = a.span.lines();
            if (open && (end - start + 1) + alines > max_unit_lines) flush();
            if (!open) {
                start = a.span.start;
                end = a.span.end;
                open = true;
            } else {
                end = a.span.end;
            }
            if (a.method) ++methods_in;
            if (alines > max_unit_lines) {
                // a single oversized method becomes its own flagged unit
                flush({"method exceeds max_unit_lines (" + std::to_string(alines) +
                       " lines)"});
            }
        }
        flush();

        // deep-nesting flag: statement nesting inside a method deeper than 4
        auto scrubbed = text::split_lines(scrub(file.content));
        scrubbed.resize(lines.size());
        auto depths = depth_profile(scrubbed);
        int max_depth_line = 0;
        for (auto& u : units) {
            if (u.file != file.path) continue;
            for (int l = u.span.start; l <= u.span.end && l <= total; ++l)
                if (depths[l] > 6) u.deep_nesting = true; // class + method + 4 levels
        }
        (void)max_depth_line;
    }
    return units;
}

Cfg build_cfg(const CodeUnit& unit, const ParseResult& parsed) {
    Cfg out;
    if (parsed.degraded) return out;
    Normalized n = normalize(unit.source);
    StmtParser sp{n, parsed};
    CfgBuilder builder;
    for (const auto& m : parsed.methods) {
        if (m.body_span.empty()) continue;
        builder.build_seq(sp.parse_block(m.body_span));
    }
    return builder.cfg;
}

Cfg build_cfg(const CodeUnit& unit) { return build_cfg(unit, parse_unit(unit)); }

Epg build_epg([[maybe_unused]] const CodeUnit& unit, const ParseResult& parsed,
              const cee::ExceptionTree& tree, const KnownThrows& known) {
    Epg epg;
    auto add_node = [&](const std::string& site, int line, const std::string& label) {
        int id = static_cast<int>(epg.nodes.size());
        epg.nodes.push_back({id, site, line, label});
        return id;
    };
    epg.boundary_node = add_node("boundary", 0, "unit boundary");
    for (const auto& m : parsed.methods) add_node("method", m.decl_span.start, m.name);

    std::map<std::pair<int, std::string>, int> catch_nodes; // (clause line, type) -> id
    for (const auto& tb : parsed.try_blocks)
        for (const auto& cc : tb.catch_clauses)
            catch_nodes[{cc.clause_line, cc.exception}] =
                add_node("catch", cc.clause_line, cc.exception);

    std::set<std::string> unknown;
    auto note_unknown = [&](const std::string& name) {
        if (!tree.contains(name)) unknown.insert(name);
    };

    // true when a catch clause of type `caught` handles `thrown`
    auto handles = [&](const std::string& thrown, const std::string& caught) {
        if (thrown == caught) return true;
        if (tree.contains(thrown) && tree.contains(caught))
            return tree.is_subtype(thrown, caught);
        return false;
    };

    // innermost-out list of try blocks whose body covers the line
    auto enclosing = [&](int line) {
        std::vector<const TryBlock*> out;
        for (const auto& tb : parsed.try_blocks)
            if (tb.try_span.contains(line)) out.push_back(&tb);
        std::sort(out.begin(), out.end(), [](const TryBlock* a, const TryBlock* b) {
            return a->try_span.lines() < b->try_span.lines();
        });
        return out;
    };

    auto route = [&](int from_node, int line, const std::string& exc) {
        note_unknown(exc);
        for (const TryBlock* tb : enclosing(line)) {
            for (const auto& cc : tb->catch_clauses) {
                if (handles(exc, cc.exception)) {
                    epg.edges.push_back(
                        {from_node, catch_nodes.at({cc.clause_line, cc.exception}), exc,
                         false});
                    return;
                }
            }
        }
        epg.edges.push_back({from_node, epg.boundary_node, exc, true});
    };

    // declared throws of same-unit methods, by name
    std::map<std::string, std::vector<std::string>> local_throws;
    for (const auto& m : parsed.methods)
        if (!m.declared_throws.empty()) local_throws[m.name] = m.declared_throws;

    for (const auto& cs : parsed.call_sites) {
        std::set<std::string> excs;
        for (const auto& e : known.match(cs.text)) excs.insert(e);
        auto it = local_throws.find(cs.callee);
        if (it != local_throws.end())
            for (const auto& e : it->second) excs.insert(e);
        if (excs.empty()) continue;
        int id = add_node("call", cs.line, cs.callee);
        for (const auto& e : excs) route(id, cs.line, e);
    }
    for (const auto& ts : parsed.throw_sites) {
        if (ts.exception.empty()) continue;
        int id = add_node("throw", ts.line, ts.exception);
        route(id, ts.line, ts.exception);
    }

    epg.unknown_exceptions.assign(unknown.begin(), unknown.end());
    return epg;
}

std::vector<SensitiveSegment> static_sensitive_segments(const CodeUnit& unit,
                                                        const Epg& epg) {
    std::map<int, std::set<std::string>> fragile_lines; // line -> exceptions
    for (const auto& e : epg.edges) {
        if (!e.to_boundary) continue;
        int line = epg.nodes.at(e.from).line;
        fragile_lines[line].insert(e.exception);
    }
    std::vector<SensitiveSegment> out;
    int seg_start = 0, prev = 0;
    std::set<std::string> acc;
    auto flush = [&]() {
        if (seg_start == 0) return;
        SensitiveSegment s;
        s.segment_id = unit.unit_id + ":s" + std::to_string(out.size() + 1);
        s.unit_id = unit.unit_id;
        s.span = {seg_start, prev};
        s.tag = SensitiveSegment::Tag::Static;
        s.suspected_exceptions.assign(acc.begin(), acc.end());
        out.push_back(std::move(s));
        seg_start = 0;
        acc.clear();
    };
    for (const auto& [line, excs] : fragile_lines) {
        if (seg_start == 0) {
            seg_start = line;
        } else if (line != prev + 1) {
            flush();
            seg_start = line;
        }
        prev = line;
        acc.insert(excs.begin(), excs.end());
    }
    flush();
    return out;
}

std::string dump_graph(const Cfg& cfg) {
    std::ostringstream os;
    for (const auto& n : cfg.nodes)
        os << "node " << n.id << " " << n.kind << " line=" << n.line << "\n";
    for (const auto& [a, b] : cfg.edges) os << "edge " << a << " " << b << "\n";
    return os.str();
}

std::string dump_graph(const Epg& epg) {
    std::ostringstream os;
    for (const auto& n : epg.nodes)
        os << "node " << n.id << " " << n.site << " line=" << n.line << " " << n.label
           << "\n";
    for (const auto& e : epg.edges)
        os << "edge " << e.from << " " << e.to << " " << e.exception
           << (e.to_boundary ? " boundary" : "") << "\n";
    return os.str();
}

} // namespace seeker::code
