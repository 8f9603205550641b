#pragma once

#include "seeker/cee.hpp"
#include "seeker/code_model.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seeker::metrics {

struct EvalBlock {
    code::LineSpan try_span; // body lines, in fragile-source coordinates
    std::vector<std::string> types;
    std::string handler_text; // full try-catch text
};

struct EvalRecord {
    std::string snippet_id;
    std::set<int> detected_sensitive_lines;
    std::set<int> actual_sensitive_lines;
    std::vector<EvalBlock> predicted_blocks;
    std::vector<EvalBlock> actual_blocks;
    std::string generated_code; // full optimized snippet, for review scoring
};

// |detected ∩ actual| / |actual|; 1.0 when actual is empty. Over-detection is
// not penalized.
double cov(const std::set<int>& detected, const std::set<int>& actual);

// Exact-span one-to-one matching; correct / (|actual| + |unmatched
// predicted|); 1.0 when both sides are empty.
double cov_p(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual);

// A predicted type is correct iff it equals the actual type of its
// span-matched block or is a subtype of it; types on unmatched predicted
// blocks count in the denominator only.
double acc(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual,
           const cee::ExceptionTree& tree);

// 1 − levenshtein(a, b) / max(|a|, |b|) over characters; 1.0 when both empty.
// Inputs are whitespace-normalized by the caller where required.
double edit_similarity(const std::string& a, const std::string& b);

// Average similarity over actual blocks: matched pairs contribute their
// whitespace-normalized similarity, unmatched actual blocks contribute 0.
// 1.0 when there are no actual blocks.
double es(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual);

// good / total; throws on empty input.
double crs(const std::vector<bool>& judgments);

class ReviewOracle {
public:
    virtual ~ReviewOracle() = default;
    virtual double score(const std::string& code) = 0; // any scale; clamped by acrs()
    virtual bool judge(const std::string& code) = 0;   // good / bad
};

// Deterministic checklist: parses (0.4), has a specific catch type (0.3),
// has a non-empty handler body (0.3). Judge = specific catch AND non-empty
// handler. "Specific" means not Exception/Throwable/Error.
class MockReview : public ReviewOracle {
public:
    double score(const std::string& code) override;
    bool judge(const std::string& code) override;
};

// Oracle score clamped to [0,1]; nullopt when the oracle fails.
std::optional<double> acrs(const std::string& generated_code, ReviewOracle& oracle);

struct SnippetMetrics {
    std::string snippet_id;
    double cov = 0, cov_p = 0, acc = 0, es = 0;
    bool judged_good = false;
    std::optional<double> acrs;
};

struct MetricsReport {
    std::optional<double> acrs; // unavailable when the oracle failed
    double cov = 0, cov_p = 0, acc = 0, es = 0, crs = 0;
    std::vector<SnippetMetrics> per_snippet;
    bool empty_input = false;

    nlohmann::json to_json() const;
    // Plain-text table, columns ACRS, COV, COV-P, ACC, ES, CRS.
    std::string table_text() const;
};

MetricsReport compute_report(const std::vector<EvalRecord>& records,
                             const cee::ExceptionTree& tree, ReviewOracle& oracle);

} // namespace seeker::metrics
