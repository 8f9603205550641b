#pragma once

#include "seeker/cee.hpp"
#include "seeker/code_model.hpp"
#include "seeker/deep_rag.hpp"
#include "seeker/gateway.hpp"
#include "seeker/metrics.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seeker::pipeline {

// Strategy text copied verbatim from the knowledge-base node.
struct HandlingStrategy {
    std::string exception;
    std::string handle_logic;
    std::string handle_code_template;
};

struct ExceptionBranchHit {
    std::string branch_root; // valid branch root of the tree
    std::string segment_id;
    std::string evidence;
};

struct ExceptionCandidate {
    std::string exception;
    std::string segment_id;
    double likelihood = 0.0;  // in [0,1]
    double suitability = 0.0; // in [0,1]
    double grade = 0.0;       // alpha*likelihood + beta*suitability
    HandlingStrategy strategy;
};

struct UnitSummary {
    std::string unit_id;
    std::string summary_text; // non-empty when the unit has any statement
};

// One synthesized try statement: the body span in the unit's original
// coordinates, the catch types most-specific-first, and the full text of the
// statement as inserted.
struct AppliedBlock {
    std::string segment_id;
    code::LineSpan span_in_unit;
    std::vector<std::string> catch_types;
    std::vector<double> grades; // aligned with catch_types
    std::string text;
};

struct UnitReport {
    std::string unit_id;
    std::string file;
    code::LineSpan span; // within the original file
    UnitSummary summary;
    std::vector<code::SensitiveSegment> segments;
    std::vector<ExceptionBranchHit> hits;
    std::vector<rag::Retrieval> retrievals;
    std::vector<ExceptionCandidate> candidates; // ranked
    std::vector<AppliedBlock> applied;          // every grade > gamma
    std::vector<std::string> handling_failures;
    std::vector<std::string> diagnostics;
    bool failed = false; // unit emitted unmodified
    std::string optimized_source;
};

struct PipelineConfig {
    double alpha = 0.5; // likelihood weight (normalized with beta on input)
    double beta = 0.5;  // suitability weight
    double gamma = 0.5; // application threshold, strict >
    rag::RagConfig rag; // delta / theta / depth limit / concurrency
    int max_unit_lines = 200;
    int concurrency = 8; // concurrent units
};

struct AnalysisReport {
    PipelineConfig config; // echo of the effective configuration
    std::vector<UnitReport> units; // canonical order: (file, unit span)
    std::map<std::string, std::string> diffs; // modified file -> unified diff

    int applied_total() const;
    bool any_failure() const;
    nlohmann::json to_json() const;
};

class Pipeline {
public:
    Pipeline(const cee::ExceptionTree& tree, code::KnownThrows known,
             std::shared_ptr<gateway::Gateway> gw, rag::Oracles oracles,
             PipelineConfig config = {});

    const PipelineConfig& config() const { return config_; }
    const cee::ExceptionTree& tree() const { return tree_; }
    rag::DeepRag& deep_rag() { return rag_; }

    // Deterministic function-level summary: first comment line plus the
    // unit's identifier bag.
    UnitSummary summarize(const code::CodeUnit& unit) const;

    // Static analysis united with scenario/property line matching; overlapping
    // spans merge (tag Both). A matcher failure degrades the match side to
    // empty with a warning; the static side always runs.
    std::pair<std::vector<code::SensitiveSegment>, std::vector<ExceptionBranchHit>>
    detect(const code::CodeUnit& unit, const code::ParseResult& parsed,
           const code::Epg& epg, std::vector<std::string>* diagnostics = nullptr) const;

    // Unscored candidates drawn from retrieval restricted to the hit branches;
    // each carries the node's handling strategy verbatim.
    std::vector<ExceptionCandidate> prey(
        const code::CodeUnit& unit, const UnitSummary& summary,
        const std::vector<code::SensitiveSegment>& segments,
        const std::vector<ExceptionBranchHit>& hits,
        std::vector<rag::Retrieval>* retrievals = nullptr,
        std::vector<std::string>* diagnostics = nullptr,
        const std::vector<std::string>& extra_queries = {}) const;

    // Scores each candidate, computes grade = alpha*l + beta*u, and sorts by
    // (grade desc, node depth desc, name asc). Out-of-range scores are
    // clamped with a warning.
    std::vector<ExceptionCandidate> rank(std::vector<ExceptionCandidate> candidates,
                                         const code::CodeUnit& unit,
                                         const std::vector<code::SensitiveSegment>& segments,
                                         std::vector<std::string>* warnings = nullptr) const;

    struct HandleResult {
        std::string optimized_source;
        std::vector<AppliedBlock> applied;
        std::vector<std::string> failures;
    };

    // Wraps each above-threshold segment in one try with its catch clauses
    // most-specific-first; segments already inside a catching try for an
    // equal-or-supertype exception are skipped; a synthesis that fails to
    // re-parse is rolled back and recorded.
    HandleResult handle(const code::CodeUnit& unit,
                        const std::vector<ExceptionCandidate>& ranked,
                        const std::vector<code::SensitiveSegment>& segments) const;

    UnitReport run_unit(const code::CodeUnit& unit) const;

    // Full pipeline; per-unit errors are isolated (the unit is emitted
    // unmodified with diagnostics).
    std::pair<code::Codebase, AnalysisReport> run(const code::Codebase& codebase) const;

private:
    const cee::ExceptionTree& tree_;
    code::KnownThrows known_;
    std::shared_ptr<gateway::Gateway> gateway_;
    PipelineConfig config_;
    rag::DeepRag rag_;

    std::optional<std::string> branch_root_of(const std::string& node) const;
};

struct EvaluationOutcome {
    std::vector<metrics::EvalRecord> records;
    metrics::MetricsReport report;
    std::vector<std::string> warnings;
};

// Runs the pipeline over a stripped-corpus directory (fragile snippets plus
// ground-truth sidecars; a manifest.json, when present, is verified against
// the file hashes) and scores the restored handlers.
EvaluationOutcome evaluate_corpus(const std::string& dir, const Pipeline& pipeline,
                                  metrics::ReviewOracle& oracle);

} // namespace seeker::pipeline
