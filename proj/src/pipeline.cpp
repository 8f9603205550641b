#include "seeker/pipeline.hpp"

#include "seeker/corpus.hpp"
#include "seeker/diff.hpp"
#include "seeker/errors.hpp"
#include "seeker/java_parser.hpp"
#include "seeker/parallel.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace seeker::pipeline {

namespace {

constexpr const char* kStaticEvidence = "static: ";
constexpr const char* kMatchEvidence = "match: ";

std::string one_line(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
        if (c == '"') continue; // keeps the ranker's quoted info field intact
        out.push_back(c);
    }
    return text::normalize_whitespace(out);
}

std::string span_text(const std::vector<std::string>& lines, const code::LineSpan& span) {
    std::vector<std::string> slice;
    for (int l = span.start; l <= span.end && l <= static_cast<int>(lines.size()); ++l)
        slice.push_back(lines[static_cast<std::size_t>(l - 1)]);
    return text::join_lines(slice);
}

std::string tag_name(code::SensitiveSegment::Tag tag) {
    switch (tag) {
    case code::SensitiveSegment::Tag::Static: return "static";
    case code::SensitiveSegment::Tag::Match: return "match";
    case code::SensitiveSegment::Tag::Both: return "both";
    }
    return "static";
}

json span_json(const code::LineSpan& s) { return json{{"start", s.start}, {"end", s.end}}; }

// Catch variable and handler body distilled from a handle_code template.
struct HandlerShape {
    std::string var = "e";
    std::vector<std::string> body;
};

HandlerShape handler_shape(const std::string& exception, const std::string& handle_code) {
    HandlerShape shape;
    shape.body = {"System.err.println(\"" + exception + " raised while executing this block\");"};
    if (handle_code.empty()) return shape;
    auto parsed = code::parse_source(handle_code);
    if (parsed.degraded || parsed.try_blocks.empty() ||
        parsed.try_blocks[0].catch_clauses.empty())
        return shape;
    const auto& cc = parsed.try_blocks[0].catch_clauses[0];
    auto lines = text::split_lines(handle_code);
    if (cc.clause_line >= 1 && cc.clause_line <= static_cast<int>(lines.size())) {
        const std::string& header = lines[static_cast<std::size_t>(cc.clause_line - 1)];
        auto open = header.find('(');
        auto close = header.find(')', open == std::string::npos ? 0 : open);
        if (open != std::string::npos && close != std::string::npos && close > open) {
            auto ids = java::idents(header.substr(open + 1, close - open - 1));
            if (ids.size() >= 2) shape.var = ids.back();
        }
    }
    if (!cc.handler_span.empty()) {
        std::vector<std::string> body;
        for (int l = cc.handler_span.start; l <= cc.handler_span.end; ++l) {
            auto t = text::trim(lines[static_cast<std::size_t>(l - 1)]);
            if (!t.empty()) body.push_back(t);
        }
        if (!body.empty()) shape.body = std::move(body);
    }
    return shape;
}

} // namespace

int AnalysisReport::applied_total() const {
    int n = 0;
    for (const auto& u : units) n += static_cast<int>(u.applied.size());
    return n;
}

bool AnalysisReport::any_failure() const {
    for (const auto& u : units)
        if (u.failed || !u.handling_failures.empty()) return true;
    return false;
}

json AnalysisReport::to_json() const {
    json doc;
    doc["config"] = {{"alpha", config.alpha},
                     {"beta", config.beta},
                     {"gamma", config.gamma},
                     {"delta", config.rag.delta},
                     {"theta", config.rag.theta},
                     {"depth_limit", config.rag.depth_limit},
                     {"max_unit_lines", config.max_unit_lines},
                     {"concurrency", config.concurrency}};
    doc["units"] = json::array();
    for (const auto& u : units) {
        json ju;
        ju["unit_id"] = u.unit_id;
        ju["file"] = u.file;
        ju["span"] = span_json(u.span);
        ju["summary"] = u.summary.summary_text;
        ju["failed"] = u.failed;
        ju["segments"] = json::array();
        for (const auto& s : u.segments)
            ju["segments"].push_back({{"segment_id", s.segment_id},
                                      {"span", span_json(s.span)},
                                      {"tag", tag_name(s.tag)},
                                      {"suspected_exceptions", s.suspected_exceptions}});
        ju["hits"] = json::array();
        for (const auto& h : u.hits)
            ju["hits"].push_back({{"branch_root", h.branch_root},
                                  {"segment_id", h.segment_id},
                                  {"evidence", h.evidence}});
        ju["retrievals"] = json::array();
        for (const auto& r : u.retrievals)
            ju["retrievals"].push_back({{"node", r.node},
                                        {"relevance", r.relevance},
                                        {"depth", r.depth},
                                        {"branch_root", r.branch_root}});
        ju["candidates"] = json::array();
        for (const auto& c : u.candidates)
            ju["candidates"].push_back({{"exception", c.exception},
                                        {"segment_id", c.segment_id},
                                        {"likelihood", c.likelihood},
                                        {"suitability", c.suitability},
                                        {"grade", c.grade}});
        ju["applied"] = json::array();
        for (const auto& a : u.applied)
            ju["applied"].push_back({{"segment_id", a.segment_id},
                                     {"span", span_json(a.span_in_unit)},
                                     {"catch_types", a.catch_types},
                                     {"grades", a.grades}});
        ju["handling_failures"] = u.handling_failures;
        ju["diagnostics"] = u.diagnostics;
        doc["units"].push_back(std::move(ju));
    }
    doc["diffs"] = diffs;
    return doc;
}

Pipeline::Pipeline(const cee::ExceptionTree& tree, code::KnownThrows known,
                   std::shared_ptr<gateway::Gateway> gw, rag::Oracles oracles,
                   PipelineConfig config)
    : tree_(tree),
      known_(std::move(known)),
      gateway_(std::move(gw)),
      config_(config),
      rag_(tree, std::move(oracles), config.rag) {
    if (!gateway_) throw config_error("pipeline requires a gateway");
    if (config_.alpha < 0 || config_.beta < 0 || config_.alpha + config_.beta <= 0)
        throw config_error("alpha and beta must be non-negative with a positive sum");
    if (config_.gamma < 0 || config_.gamma > 1)
        throw config_error("gamma must lie in [0,1]");
    if (config_.concurrency < 1) config_.concurrency = 1;
    rag_.assign_labels();
}

std::optional<std::string> Pipeline::branch_root_of(const std::string& node) const {
    if (!tree_.contains(node) || tree_.depth(node) < 2) return std::nullopt;
    std::string cur = node;
    while (tree_.depth(cur) > 2) cur = *tree_.parent(cur);
    return cur;
}

UnitSummary Pipeline::summarize(const code::CodeUnit& unit) const {
    UnitSummary s;
    s.unit_id = unit.unit_id;
    std::string comment;
    for (const auto& raw : text::split_lines(unit.source)) {
        auto t = text::trim(raw);
        if (t.rfind("//", 0) == 0) {
            comment = text::trim(t.substr(2));
            break;
        }
        if (t.rfind("/*", 0) == 0) {
            auto end = t.rfind("*/");
            comment = text::trim(end != std::string::npos && end > 2 ? t.substr(2, end - 2)
                                                                     : t.substr(2));
            break;
        }
    }
    std::vector<std::string> bag;
    std::set<std::string> seen;
    for (const auto& line : text::split_lines(java::scrub(unit.source))) {
        for (const auto& id : java::idents(line)) {
            if (bag.size() >= 32) break;
            if (seen.insert(id).second) bag.push_back(id);
        }
        if (bag.size() >= 32) break;
    }
    std::string idents_text;
    for (const auto& id : bag) {
        if (!idents_text.empty()) idents_text += ' ';
        idents_text += id;
    }
    if (comment.empty() && idents_text.empty()) return s;
    s.summary_text = comment.empty() ? "identifiers: " + idents_text
                                     : comment + "; identifiers: " + idents_text;
    return s;
}

std::pair<std::vector<code::SensitiveSegment>, std::vector<ExceptionBranchHit>>
Pipeline::detect(const code::CodeUnit& unit, const code::ParseResult& parsed,
                 const code::Epg& epg, std::vector<std::string>* diagnostics) const {
    auto note = [&](const std::string& msg) {
        if (diagnostics) diagnostics->push_back(msg);
    };

    auto statics = code::static_sensitive_segments(unit, epg);

    auto lines = text::split_lines(unit.source);
    // Scenario/property matching applies to statement lines: inside a method
    // body (when the unit declares methods), non-blank, and not pure closing
    // scaffolding.
    auto is_statement = [&](int l) {
        auto t = text::trim(lines[static_cast<std::size_t>(l - 1)]);
        if (t.empty() || t[0] == '}') return false;
        if (parsed.methods.empty()) return true;
        for (const auto& m : parsed.methods)
            if (m.body_span.contains(l)) return true;
        return false;
    };

    // One doc entry per branch: the Deep-RAG scenario label, and the branch
    // root's property for the property pass.
    std::string scenario_doc, property_doc;
    for (const auto& label : rag_.labels()) {
        scenario_doc += "- " + label.branch_root + ": " + one_line(label.label_text) + "\n";
        const auto& prop = tree_.node(label.branch_root).property;
        if (!prop.empty())
            property_doc += "- " + label.branch_root + ": " + one_line(prop) + "\n";
    }

    std::map<int, std::set<std::string>> line_labels;
    auto run_detector = [&](const std::string& tpl, const std::string& doc_key,
                            const std::string& doc) {
        if (doc.empty()) return;
        try {
            auto completion =
                gateway_->complete(tpl, {{doc_key, doc}, {"code", unit.source}});
            for (const auto& entry : completion.parsed.at("code_with_label")) {
                int l = entry.value("line", 0);
                if (l < 1 || l > static_cast<int>(lines.size()) || !is_statement(l))
                    continue;
                for (const auto& lab : entry.at("labels")) {
                    std::string name = lab.get<std::string>();
                    if (name != "None" && tree_.contains(name)) line_labels[l].insert(name);
                }
            }
        } catch (const std::exception& e) {
            note("detector (" + tpl + ") unavailable, match side degraded: " + e.what());
        }
    };
    run_detector("detector_scenario", "scenario", scenario_doc);
    run_detector("detector_property", "property", property_doc);

    // Match segments: maximal runs of consecutive labeled lines.
    struct Piece {
        code::LineSpan span;
        code::SensitiveSegment::Tag tag;
        std::set<std::string> suspected;
    };
    std::vector<Piece> pieces;
    for (const auto& s : statics)
        pieces.push_back({s.span, code::SensitiveSegment::Tag::Static,
                          {s.suspected_exceptions.begin(), s.suspected_exceptions.end()}});
    int run_start = 0, prev = 0;
    auto flush_match = [&]() {
        if (run_start == 0) return;
        pieces.push_back({{run_start, prev}, code::SensitiveSegment::Tag::Match, {}});
        run_start = 0;
    };
    for (const auto& [l, labs] : line_labels) {
        (void)labs;
        if (run_start == 0) run_start = l;
        else if (l != prev + 1) {
            flush_match();
            run_start = l;
        }
        prev = l;
    }
    flush_match();

    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
        if (a.span.start != b.span.start) return a.span.start < b.span.start;
        return a.span.end < b.span.end;
    });
    std::vector<Piece> merged;
    for (auto& p : pieces) {
        if (!merged.empty() && p.span.start <= merged.back().span.end) {
            auto& m = merged.back();
            m.span.end = std::max(m.span.end, p.span.end);
            m.suspected.insert(p.suspected.begin(), p.suspected.end());
            if (m.tag != p.tag) m.tag = code::SensitiveSegment::Tag::Both;
        } else {
            merged.push_back(std::move(p));
        }
    }

    std::vector<code::SensitiveSegment> segments;
    std::vector<ExceptionBranchHit> hits;
    for (const auto& m : merged) {
        code::SensitiveSegment s;
        s.segment_id = unit.unit_id + ":s" + std::to_string(segments.size() + 1);
        s.unit_id = unit.unit_id;
        s.span = m.span;
        s.tag = m.tag;
        s.suspected_exceptions.assign(m.suspected.begin(), m.suspected.end());
        std::map<std::string, std::string> evidence; // branch root -> first evidence
        for (const auto& exc : s.suspected_exceptions)
            if (auto root = branch_root_of(exc))
                evidence.emplace(*root, kStaticEvidence + exc);
        for (int l = s.span.start; l <= s.span.end; ++l) {
            auto it = line_labels.find(l);
            if (it == line_labels.end()) continue;
            for (const auto& root : it->second)
                evidence.emplace(root, kMatchEvidence + std::string("line ") +
                                           std::to_string(l));
        }
        for (const auto& [root, ev] : evidence)
            hits.push_back({root, s.segment_id, ev});
        segments.push_back(std::move(s));
    }
    return {std::move(segments), std::move(hits)};
}

std::vector<ExceptionCandidate> Pipeline::prey(
    const code::CodeUnit& unit, const UnitSummary& summary,
    const std::vector<code::SensitiveSegment>& segments,
    const std::vector<ExceptionBranchHit>& hits, std::vector<rag::Retrieval>* retrievals,
    std::vector<std::string>* diagnostics, const std::vector<std::string>& extra_queries) const {
    std::vector<ExceptionCandidate> out;
    if (hits.empty()) return out;

    auto lines = text::split_lines(unit.source);

    // Candidate generation trusts statically corroborated branches; hits from
    // scenario matching alone stay in the report as detector evidence but do
    // not seed retrieval (the match channel is too noisy for synthesis).
    std::map<std::string, std::set<std::string>> seg_branches;
    for (const auto& h : hits)
        if (h.evidence.rfind(kStaticEvidence, 0) == 0)
            seg_branches[h.segment_id].insert(h.branch_root);

    std::set<std::pair<std::string, std::string>> seen; // (segment, exception)
    for (const auto& seg : segments) {
        auto it = seg_branches.find(seg.segment_id);
        if (it == seg_branches.end() || it->second.empty()) continue;
        const auto& branches = it->second;
        std::string seg_text = span_text(lines, seg.span);

        // Predator: branch docs plus the code unit, yielding concrete type
        // suggestions used as an additional retrieval query.
        std::string branch_doc;
        for (const auto& label : rag_.labels())
            if (branches.count(label.branch_root))
                branch_doc +=
                    "- " + label.branch_root + ": " + one_line(label.label_text) + "\n";
        std::set<std::string> suggested;
        auto completion = gateway_->complete(
            "predator", {{"code_unit", seg_text},
                         {"code_summary", summary.summary_text.empty()
                                              ? std::string("(no summary)")
                                              : summary.summary_text},
                         {"exception_branches", branch_doc}});
        for (const auto& node : completion.parsed.at("ExceptionNodes")) {
            std::string t = node.value("ExceptionType", "");
            auto root = branch_root_of(t);
            if (root && branches.count(*root)) suggested.insert(t);
        }

        std::vector<std::vector<rag::Query>> query_sets;
        query_sets.push_back({{seg_text, seg.segment_id}});
        if (!suggested.empty()) {
            std::string joined;
            for (const auto& t : suggested) {
                if (!joined.empty()) joined += ' ';
                joined += t;
            }
            query_sets.push_back({{joined, seg.segment_id}});
        }
        for (const auto& extra : extra_queries)
            if (!text::trim(extra).empty())
                query_sets.push_back({{extra, seg.segment_id}});

        std::map<std::string, rag::Retrieval> by_node;
        for (const auto& qs : query_sets) {
            for (const auto& r : rag_.retrieve("", qs, branches, diagnostics)) {
                auto [pos, inserted] = by_node.emplace(r.node, r);
                if (!inserted && r.relevance > pos->second.relevance)
                    pos->second.relevance = r.relevance;
            }
        }
        std::vector<rag::Retrieval> ordered;
        for (const auto& [name, r] : by_node) {
            (void)name;
            ordered.push_back(r);
        }
        std::sort(ordered.begin(), ordered.end(),
                  [](const rag::Retrieval& a, const rag::Retrieval& b) {
                      if (a.relevance != b.relevance) return a.relevance > b.relevance;
                      if (a.depth != b.depth) return a.depth > b.depth;
                      return a.node < b.node;
                  });
        for (const auto& r : ordered) {
            if (!seen.insert({seg.segment_id, r.node}).second) continue;
            if (retrievals) retrievals->push_back(r);
            const auto& node = tree_.node(r.node);
            ExceptionCandidate c;
            c.exception = r.node;
            c.segment_id = seg.segment_id;
            c.strategy = {r.node, node.handle_logic, node.handle_code};
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<ExceptionCandidate> Pipeline::rank(
    std::vector<ExceptionCandidate> candidates, const code::CodeUnit& unit,
    const std::vector<code::SensitiveSegment>& segments,
    std::vector<std::string>* warnings) const {
    const double sum = config_.alpha + config_.beta;
    const double a = config_.alpha / sum, b = config_.beta / sum;

    auto lines = text::split_lines(unit.source);
    std::map<std::string, code::LineSpan> spans;
    for (const auto& s : segments) spans[s.segment_id] = s.span;

    auto clamp_score = [&](double v, const std::string& what,
                           const std::string& exception) {
        if (v < 0.0 || v > 1.0) {
            if (warnings)
                warnings->push_back("ranker returned out-of-range " + what + " for " +
                                    exception + "; clamped");
            return std::clamp(v, 0.0, 1.0);
        }
        return v;
    };

    for (auto& c : candidates) {
        auto it = spans.find(c.segment_id);
        std::string seg_line = it == spans.end() ? "" : one_line(span_text(lines, it->second));
        std::string info = "Type=" + c.exception +
                           " ;; Scenario=" + one_line(tree_.node(c.exception).scenario) +
                           " ;; Segment=" + seg_line;
        auto completion = gateway_->complete(
            "ranker",
            {{"strategy1", one_line(c.strategy.handle_logic)}, {"info1", info}});
        const auto& exes = completion.parsed.at("Exceptions");
        double l = 0.0, u = 0.0;
        if (!exes.empty() && exes.at(0).is_object()) {
            l = exes.at(0).value("LikelihoodScore", 0.0);
            u = exes.at(0).value("SuitabilityScore", 0.0);
        } else if (warnings) {
            warnings->push_back("ranker returned no scores for " + c.exception +
                                "; defaulted to 0");
        }
        c.likelihood = clamp_score(l, "likelihood", c.exception);
        c.suitability = clamp_score(u, "suitability", c.exception);
        c.grade = a * c.likelihood + b * c.suitability;
    }

    std::sort(candidates.begin(), candidates.end(),
              [&](const ExceptionCandidate& x, const ExceptionCandidate& y) {
                  if (x.grade != y.grade) return x.grade > y.grade;
                  int dx = tree_.depth(x.exception), dy = tree_.depth(y.exception);
                  if (dx != dy) return dx > dy; // more specific first
                  if (x.exception != y.exception) return x.exception < y.exception;
                  return x.segment_id < y.segment_id;
              });
    return candidates;
}

Pipeline::HandleResult Pipeline::handle(
    const code::CodeUnit& unit, const std::vector<ExceptionCandidate>& ranked,
    const std::vector<code::SensitiveSegment>& segments) const {
    HandleResult result;
    result.optimized_source = unit.source;

    auto parsed = code::parse_unit(unit);
    if (parsed.degraded) {
        result.failures.push_back("unit does not parse; handling skipped");
        return result;
    }

    std::map<std::string, code::LineSpan> spans;
    for (const auto& s : segments) spans[s.segment_id] = s.span;

    // Already inside a catching try for an equal-or-supertype exception?
    auto already_handled = [&](const code::LineSpan& span, const std::string& type) {
        for (int l = span.start; l <= span.end; ++l) {
            bool covered = false;
            for (const auto& tb : parsed.try_blocks) {
                if (l < tb.try_line || l > tb.close_line) continue;
                for (const auto& cc : tb.catch_clauses)
                    if (tree_.contains(cc.exception) && tree_.contains(type) &&
                        tree_.is_subtype(type, cc.exception)) {
                        covered = true;
                        break;
                    }
                if (covered) break;
            }
            if (!covered) return false;
        }
        return true;
    };

    // Per segment: above-threshold types in ranked order, then most-specific
    // first for the catch clauses.
    struct Plan {
        code::LineSpan span;
        std::string segment_id;
        std::vector<std::string> types;
        std::map<std::string, const ExceptionCandidate*> by_type;
    };
    std::map<std::string, Plan> plans;
    for (const auto& c : ranked) {
        if (!(c.grade > config_.gamma)) continue;
        auto it = spans.find(c.segment_id);
        if (it == spans.end() || it->second.empty()) continue;
        if (already_handled(it->second, c.exception)) continue;
        auto& plan = plans[c.segment_id];
        plan.span = it->second;
        plan.segment_id = c.segment_id;
        if (plan.by_type.emplace(c.exception, &c).second) plan.types.push_back(c.exception);
    }

    std::vector<const Plan*> ordered;
    for (const auto& [id, plan] : plans) {
        (void)id;
        ordered.push_back(&plan);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Plan* x, const Plan* y) {
        return x->span.start > y->span.start; // bottom-up keeps spans valid
    });

    auto lines = text::split_lines(unit.source);
    for (const Plan* plan : ordered) {
        std::vector<std::string> types = plan->types;
        std::sort(types.begin(), types.end(), [&](const std::string& x, const std::string& y) {
            int dx = tree_.depth(x), dy = tree_.depth(y);
            if (dx != dy) return dx > dy; // subtype before supertype
            return x < y;
        });

        const auto& span = plan->span;
        std::string indent;
        for (int l = span.start; l <= span.end; ++l) {
            const std::string& raw = lines[static_cast<std::size_t>(l - 1)];
            if (!text::trim(raw).empty()) {
                indent = raw.substr(0, raw.find_first_not_of(" \t"));
                break;
            }
        }

        std::vector<std::string> tail;
        for (const auto& t : types) {
            auto shape = handler_shape(t, plan->by_type.at(t)->strategy.handle_code_template);
            tail.push_back(indent + "} catch (" + t + " " + shape.var + ") {");
            for (const auto& stmt : shape.body) tail.push_back(indent + "    " + stmt);
        }
        tail.push_back(indent + "}");

        std::vector<std::string> attempt;
        attempt.reserve(lines.size() + tail.size() + 1);
        attempt.insert(attempt.end(), lines.begin(), lines.begin() + span.start - 1);
        attempt.push_back(indent + "try {");
        attempt.insert(attempt.end(), lines.begin() + span.start - 1,
                       lines.begin() + span.end);
        attempt.insert(attempt.end(), tail.begin(), tail.end());
        attempt.insert(attempt.end(), lines.begin() + span.end, lines.end());

        auto reparsed = code::parse_source(text::join_lines(attempt));
        if (reparsed.degraded) {
            result.failures.push_back("handling_failure: synthesized handler for segment " +
                                      plan->segment_id + " failed to re-parse; rolled back");
            continue;
        }
        lines = std::move(attempt);

        AppliedBlock applied;
        applied.segment_id = plan->segment_id;
        applied.span_in_unit = span;
        applied.catch_types = types;
        for (const auto& t : types) applied.grades.push_back(plan->by_type.at(t)->grade);
        std::vector<std::string> stmt_lines;
        stmt_lines.push_back(indent + "try {");
        for (int l = span.start; l <= span.end; ++l)
            stmt_lines.push_back(
                text::split_lines(unit.source)[static_cast<std::size_t>(l - 1)]);
        stmt_lines.insert(stmt_lines.end(), tail.begin(), tail.end());
        applied.text = text::join_lines(stmt_lines);
        result.applied.push_back(std::move(applied));
    }

    std::sort(result.applied.begin(), result.applied.end(),
              [](const AppliedBlock& x, const AppliedBlock& y) {
                  return x.span_in_unit.start < y.span_in_unit.start;
              });
    result.optimized_source = text::join_lines(lines);
    return result;
}

UnitReport Pipeline::run_unit(const code::CodeUnit& unit) const {
    UnitReport r;
    r.unit_id = unit.unit_id;
    r.file = unit.file;
    r.span = unit.span;
    r.optimized_source = unit.source;
    r.diagnostics = unit.diagnostics;

    if (unit.degraded) {
        r.failed = true;
        r.diagnostics.push_back("unit is degraded; emitted unmodified");
        return r;
    }
    try {
        auto parsed = code::parse_unit(unit);
        auto epg = code::build_epg(unit, parsed, tree_, known_);
        auto [segments, hits] = detect(unit, parsed, epg, &r.diagnostics);
        r.segments = segments;
        r.hits = hits;
        r.summary = summarize(unit);

        auto candidates =
            prey(unit, r.summary, segments, hits, &r.retrievals, &r.diagnostics);
        r.candidates = rank(std::move(candidates), unit, segments, &r.diagnostics);

        // Ranker feedback: branches whose every candidate fell at or below
        // gamma trigger one predator re-query with the rejections noted.
        std::set<std::string> candidate_roots, passing_roots;
        for (const auto& c : r.candidates)
            if (auto root = branch_root_of(c.exception)) {
                candidate_roots.insert(*root);
                if (c.grade > config_.gamma) passing_roots.insert(*root);
            }
        std::vector<std::string> starved;
        for (const auto& root : candidate_roots)
            if (!passing_roots.count(root)) starved.push_back(root);
        if (!starved.empty()) {
            std::string feedback = "previously rejected exception candidates for branches:";
            for (const auto& root : starved) feedback += " " + root;
            for (const auto& c : r.candidates)
                if (!(c.grade > config_.gamma)) feedback += " " + c.exception;
            r.diagnostics.push_back("ranker feedback: one predator retry for " +
                                    std::to_string(starved.size()) + " starved branch(es)");
            auto retried = prey(unit, r.summary, segments, hits, nullptr, &r.diagnostics,
                                {feedback});
            std::set<std::pair<std::string, std::string>> have;
            for (const auto& c : r.candidates) have.insert({c.segment_id, c.exception});
            std::vector<ExceptionCandidate> merged = r.candidates;
            for (auto& c : retried)
                if (have.insert({c.segment_id, c.exception}).second)
                    merged.push_back(std::move(c));
            r.candidates = rank(std::move(merged), unit, segments, &r.diagnostics);
        }

        auto handled = handle(unit, r.candidates, segments);
        r.applied = std::move(handled.applied);
        r.handling_failures = std::move(handled.failures);
        r.optimized_source = std::move(handled.optimized_source);
    } catch (const std::exception& e) {
        r.failed = true;
        r.optimized_source = unit.source;
        r.diagnostics.push_back(std::string("unit failed, emitted unmodified: ") + e.what());
    }
    return r;
}

std::pair<code::Codebase, AnalysisReport> Pipeline::run(const code::Codebase& codebase) const {
    AnalysisReport report;
    report.config = config_;

    auto units = code::segment(codebase, config_.max_unit_lines);
    report.units = parallel_map(units, config_.concurrency,
                                [&](const code::CodeUnit& u) { return run_unit(u); });
    std::sort(report.units.begin(), report.units.end(),
              [](const UnitReport& x, const UnitReport& y) {
                  if (x.file != y.file) return x.file < y.file;
                  return x.span.start < y.span.start;
              });

    code::Codebase optimized;
    for (const auto& file : codebase.files) {
        std::vector<const UnitReport*> mine;
        for (const auto& u : report.units)
            if (u.file == file.path) mine.push_back(&u);
        bool modified = false;
        for (const auto* u : mine) {
            std::string original =
                span_text(text::split_lines(file.content), u->span);
            if (u->optimized_source != original) modified = true;
        }
        if (!modified) {
            optimized.files.push_back(file);
            continue;
        }
        auto lines = text::split_lines(file.content);
        for (auto it = mine.rbegin(); it != mine.rend(); ++it) {
            const UnitReport* u = *it;
            auto repl = text::split_lines(u->optimized_source);
            lines.erase(lines.begin() + u->span.start - 1, lines.begin() + u->span.end);
            lines.insert(lines.begin() + u->span.start - 1, repl.begin(), repl.end());
        }
        std::string content = text::join_lines(lines);
        report.diffs[file.path] =
            diffutil::unified_diff(file.content, content, file.path, file.path);
        optimized.files.push_back({file.path, std::move(content)});
    }
    return {std::move(optimized), std::move(report)};
}

EvaluationOutcome evaluate_corpus(const std::string& dir, const Pipeline& pipeline,
                                  metrics::ReviewOracle& oracle) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw io_error("corpus directory not found: " + dir);

    corpus::CorpusManifest manifest;
    EvaluationOutcome outcome;
    auto manifest_path = (fs::path(dir) / "manifest.json").string();
    if (fs::exists(manifest_path)) {
        manifest = corpus::CorpusManifest::load(manifest_path);
        for (const auto& e : manifest.entries) {
            auto content = text::read_file((fs::path(dir) / e.file).string());
            if (text::fnv1a64_hex(content) != e.hash)
                throw validation_error("manifest hash mismatch for " + e.file);
            if (!e.truth_file.empty()) {
                auto truth = text::read_file((fs::path(dir) / e.truth_file).string());
                if (text::fnv1a64_hex(truth) != e.truth_hash)
                    throw validation_error("manifest hash mismatch for " + e.truth_file);
            }
        }
    } else {
        manifest = corpus::build_manifest(dir);
        outcome.warnings.push_back("no manifest.json in " + dir +
                                   "; built one from directory contents");
    }
    outcome.warnings.insert(outcome.warnings.end(), manifest.diagnostics.begin(),
                            manifest.diagnostics.end());

    for (const auto& entry : manifest.entries) {
        if (entry.truth_file.empty()) {
            outcome.warnings.push_back("snippet " + entry.id +
                                       " has no ground truth; skipped");
            continue;
        }
        auto fragile = text::read_file((fs::path(dir) / entry.file).string());
        auto gt = corpus::load_ground_truth((fs::path(dir) / entry.truth_file).string());

        code::Codebase single;
        single.files.push_back({entry.file, fragile});
        auto [optimized, analysis] = pipeline.run(single);

        metrics::EvalRecord rec;
        rec.snippet_id = entry.id;
        rec.actual_sensitive_lines = gt.sensitive_lines;
        for (const auto& b : gt.blocks)
            rec.actual_blocks.push_back({b.try_span, b.types, b.handler_text});
        for (const auto& u : analysis.units) {
            int offset = u.span.start - 1;
            for (const auto& s : u.segments)
                for (int l = s.span.start; l <= s.span.end; ++l)
                    rec.detected_sensitive_lines.insert(offset + l);
            for (const auto& a : u.applied)
                rec.predicted_blocks.push_back(
                    {{offset + a.span_in_unit.start, offset + a.span_in_unit.end},
                     a.catch_types,
                     a.text});
        }
        rec.generated_code = optimized.files.empty() ? fragile : optimized.files[0].content;
        outcome.records.push_back(std::move(rec));
    }

    outcome.report = metrics::compute_report(outcome.records, pipeline.tree(), oracle);
    return outcome;
}

} // namespace seeker::pipeline
