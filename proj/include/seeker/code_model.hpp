#pragma once

#include "seeker/cee.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seeker::code {

struct SourceFile {
    std::string path;
    std::string content;
};

struct Codebase {
    std::vector<SourceFile> files;
};

// 1-based, inclusive both ends. start > end encodes an empty span.
struct LineSpan {
    int start = 1;
    int end = 0;
    bool empty() const { return start > end; }
    int lines() const { return empty() ? 0 : end - start + 1; }
    bool contains(int line) const { return line >= start && line <= end; }
    bool operator==(const LineSpan&) const = default;
};

struct CodeUnit {
    std::string unit_id;
    std::string file;
    LineSpan span; // within the original file
    std::string source;
    enum class Kind { FunctionBlock, ClassBlock, FileBlock } kind = Kind::FileBlock;
    bool degraded = false;
    bool deep_nesting = false; // nesting depth > 4 inside the unit
    std::vector<std::string> diagnostics;
};

struct MethodDecl {
    std::string name;
    int param_count = 0;
    std::vector<std::string> declared_throws;
    LineSpan decl_span; // signature through closing brace
    LineSpan body_span; // statements between the body braces
};

struct CatchClause {
    std::string exception; // multi-catch yields one clause per type
    LineSpan handler_span; // statements inside the catch body
    int clause_line = 0;   // line of the `catch (...)` header
};

struct TryBlock {
    LineSpan try_span; // statements inside the try body (scaffolding excluded)
    int try_line = 0;  // line of the `try {` header
    int close_line = 0; // line of the statement's final `}`
    std::vector<CatchClause> catch_clauses;
    std::optional<LineSpan> finally_span;
    int finally_line = 0; // line of the `finally {` header, 0 if absent
};

struct CallSite {
    int line = 0;
    std::string callee; // best-effort identifier before '('
    std::string text;   // full source line
};

struct ThrowSite {
    int line = 0;
    std::string exception; // empty when not `throw new X(...)`
};

struct ParseResult {
    std::vector<MethodDecl> methods;
    std::vector<TryBlock> try_blocks;
    std::vector<CallSite> call_sites;
    std::vector<ThrowSite> throw_sites;
    std::vector<std::string> diagnostics;
    bool degraded = false;
};

struct CfgNode {
    int id = 0;
    int line = 0;
    std::string kind; // entry | stmt | branch | loop | catch
};

struct Cfg {
    std::vector<CfgNode> nodes;
    std::vector<std::pair<int, int>> edges;
};

struct EpgNode {
    int id = 0;
    std::string site; // call | throw | catch | boundary | method
    int line = 0;     // 0 for the boundary node
    std::string label;
};

struct EpgEdge {
    int from = 0;
    int to = 0;
    std::string exception;
    bool to_boundary = false;
};

struct Epg {
    std::vector<EpgNode> nodes;
    std::vector<EpgEdge> edges;
    std::vector<std::string> unknown_exceptions; // names absent from the CEE
    int boundary_node = -1;
};

struct SensitiveSegment {
    std::string segment_id;
    std::string unit_id;
    LineSpan span;
    enum class Tag { Static, Match, Both } tag = Tag::Static;
    std::vector<std::string> suspected_exceptions; // sorted, unique
};

// Bundled table of JDK call patterns that can raise exceptions; extensible.
class KnownThrows {
public:
    static KnownThrows load(const std::string& path);
    KnownThrows() = default;

    // Exceptions whose pattern occurs (case-insensitively) in the line.
    std::vector<std::string> match(const std::string& line) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, std::string>> entries_; // lowercase pattern -> type
};

// Greedy packing of consecutive top-level declarations into units of at most
// max_unit_lines, never splitting a method. Every file line lands in exactly
// one unit.
std::vector<CodeUnit> segment(const Codebase& codebase, int max_unit_lines = 200);

ParseResult parse_unit(const CodeUnit& unit);
ParseResult parse_source(const std::string& source);

Cfg build_cfg(const CodeUnit& unit, const ParseResult& parsed);
Cfg build_cfg(const CodeUnit& unit);

Epg build_epg(const CodeUnit& unit, const ParseResult& parsed,
              const cee::ExceptionTree& tree, const KnownThrows& known);

std::vector<SensitiveSegment> static_sensitive_segments(const CodeUnit& unit,
                                                        const Epg& epg);

// Line-oriented text dump (node/edge records) for golden tests.
std::string dump_graph(const Cfg& cfg);
std::string dump_graph(const Epg& epg);

} // namespace seeker::code
