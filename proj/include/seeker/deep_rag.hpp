#pragma once

#include "seeker/cee.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace seeker::rag {

// Development-scenario label attached to one exception branch.
struct ScenarioLabel {
    std::string branch_root;
    std::string label_text;   // non-empty
    int granularity_rev = 0;  // bumped on each refinement
};

struct Query {
    std::string text; // non-empty
    std::string origin_segment;
};

enum class FailureKind { MissedBranch, WrongBranch };

struct FailurePattern {
    std::string branch_root;
    std::string example_id;
    FailureKind kind = FailureKind::MissedBranch;
    std::string note; // the example text that failed, consumed by refiners
};

struct BranchStats {
    double mean_pass_rate = 0.0;
    double mean_accuracy = 0.0;
};

struct VerificationContext {
    std::vector<FailurePattern> failure_patterns;
    std::map<std::string, BranchStats> per_branch_stats;
};

struct Retrieval {
    std::string node;
    double relevance = 0.0; // in [0,1]
    int depth = 0;          // absolute depth in the tree (root = 0), so >= 2
    std::string branch_root;
};

// Held-out example used to verify branch labels.
struct VerificationExample {
    std::string example_id;
    std::string text; // code or prose describing the scenario
    std::set<std::string> truth_branches;
    std::vector<std::string> truth_types;
};

struct RagConfig {
    double theta = 0.5;      // verification threshold
    double delta = 0.3;      // relevance threshold (strict >)
    int max_refine_rounds = 3;
    int depth_limit = 0;     // relative depth cap within a branch; 0 = no cap
    int max_retrievals = 10;
    int concurrency = 8;     // in-flight scorer calls
};

// Text oracles. Live implementations go through the gateway; the mocks below
// are deterministic and exactly recomputable in tests.
class Labeler {
public:
    virtual ~Labeler() = default;
    virtual std::string label(const cee::ExceptionTree& tree, const cee::Branch& branch) = 0;
};

class Matcher {
public:
    virtual ~Matcher() = default;
    virtual bool matches(const std::string& query_text, const std::string& label_text) = 0;
};

class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    // node_text = node name + scenario + property; query_text = summary +
    // queries.
    virtual double score(const std::string& node_text, const std::string& query_text) = 0;
};

class Refiner {
public:
    virtual ~Refiner() = default;
    virtual std::string refine(const std::string& label_text,
                               const std::vector<FailurePattern>& failures) = 0;
};

// Joins the scenario texts of the branch members, branch root first, skipping
// duplicates; falls back to the branch root name when no scenario text exists.
class MockLabeler : public Labeler {
public:
    std::string label(const cee::ExceptionTree& tree, const cee::Branch& branch) override;
};

// True iff the query and the label share a content word (length >= 4 after
// lowercasing), where "share" allows one word to be a substring of the other
// ("reads" matches "read", "filereader" matches "file").
class MockMatcher : public Matcher {
public:
    bool matches(const std::string& query_text, const std::string& label_text) override;
};

// Fraction of query content words that share a (substring-compatible) content
// word with the node text; 0 when the query has no content words.
class MockScorer : public RelevanceScorer {
public:
    double score(const std::string& node_text, const std::string& query_text) override;
};

// Appends the content words of the failure notes that the label does not
// already contain, in first-appearance order.
class MockRefiner : public Refiner {
public:
    std::string refine(const std::string& label_text,
                       const std::vector<FailurePattern>& failures) override;
};

struct Oracles {
    std::shared_ptr<Labeler> labeler;
    std::shared_ptr<Matcher> matcher;
    std::shared_ptr<RelevanceScorer> scorer;
    std::shared_ptr<Refiner> refiner;

    static Oracles mock();
};

struct VerifyResult {
    double mean_pass_rate = 0.0;
    double mean_accuracy = 0.0;
    std::vector<FailurePattern> failures;
};

class DeepRag {
public:
    DeepRag(const cee::ExceptionTree& tree, Oracles oracles, RagConfig config = {});

    const RagConfig& config() const { return config_; }
    const cee::ExceptionTree& tree() const { return tree_; }

    const std::vector<ScenarioLabel>& labels() const { return labels_; }
    void set_labels(std::vector<ScenarioLabel> labels);

    // One label per branch, ordered like branches().
    const std::vector<ScenarioLabel>& assign_labels();

    // Union of branch roots whose label matches any query; lexicographic.
    std::set<std::string> identify_branches(const std::vector<Query>& queries) const;

    // Pass = the example's text identifies this branch; accuracy = retrieval
    // restricted to this branch contains a truth type or a subtype of one.
    // Throws on an empty example list.
    VerifyResult verify_labels(const cee::Branch& branch,
                               const std::vector<VerificationExample>& examples) const;

    // Verifies every branch against the examples that name it; branches with
    // no examples get no stats.
    VerificationContext verify_all(const std::vector<VerificationExample>& examples) const;

    // Refines labels whose stats fall below theta and that have recorded
    // failures; returns the number of labels refined. Labels already at
    // max_refine_rounds are left as-is with a warning.
    int refine_labels(const VerificationContext& context);

    // verify -> refine loop, bounded by max_refine_rounds; returns the final
    // verification context.
    VerificationContext calibrate(const std::vector<VerificationExample>& examples);

    // Scores nodes of the identified (or explicitly restricted) branches up
    // to the relative-depth cap; keeps relevance > delta; sorts by
    // (relevance desc, depth desc, name asc); returns at most max_retrievals.
    // Scorer failures skip the node and are reported through diagnostics.
    std::vector<Retrieval> retrieve(
        const std::string& summary, const std::vector<Query>& queries,
        const std::optional<std::set<std::string>>& restrict_branches = std::nullopt,
        std::vector<std::string>* diagnostics = nullptr) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    const cee::ExceptionTree& tree_;
    Oracles oracles_;
    RagConfig config_;
    std::vector<ScenarioLabel> labels_;
    std::vector<std::string> warnings_;
};

// Label sidecar persistence, kept next to the CEE file.
std::string labels_sidecar_path(const std::string& cee_path);
void save_labels(const std::string& path, const std::vector<ScenarioLabel>& labels,
                 const VerificationContext* report = nullptr);
std::vector<ScenarioLabel> load_labels(const std::string& path);

} // namespace seeker::rag
