#include "seeker/deep_rag.hpp"

#include "seeker/errors.hpp"
#include "seeker/parallel.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seeker::rag {

namespace {

constexpr std::size_t kMinContentWordLen = 4;

std::vector<std::string> content_words(const std::string& s) {
    std::vector<std::string> out;
    for (auto& w : text::words(s))
        if (w.size() >= kMinContentWordLen) out.push_back(std::move(w));
    return out;
}

bool word_overlap(const std::string& a, const std::string& b) {
    return a.find(b) != std::string::npos || b.find(a) != std::string::npos;
}

bool any_overlap(const std::string& w, const std::vector<std::string>& pool) {
    for (const auto& p : pool)
        if (word_overlap(w, p)) return true;
    return false;
}

} // namespace

std::string MockLabeler::label(const cee::ExceptionTree& tree, const cee::Branch& branch) {
    std::vector<std::string> parts;
    for (const auto& name : branch.member_nodes) {
        const auto& scenario = tree.node(name).scenario;
        if (scenario.empty()) continue;
        if (std::find(parts.begin(), parts.end(), scenario) == parts.end())
            parts.push_back(scenario);
    }
    if (parts.empty()) return branch.branch_root;
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += " ";
        out += p;
    }
    return out;
}

bool MockMatcher::matches(const std::string& query_text, const std::string& label_text) {
    auto label_words = content_words(label_text);
    for (const auto& q : content_words(query_text))
        if (any_overlap(q, label_words)) return true;
    return false;
}

double MockScorer::score(const std::string& node_text, const std::string& query_text) {
    auto query_words = content_words(query_text);
    if (query_words.empty()) return 0.0;
    auto node_words = content_words(node_text);
    std::size_t hit = 0;
    for (const auto& q : query_words)
        if (any_overlap(q, node_words)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(query_words.size());
}

std::string MockRefiner::refine(const std::string& label_text,
                                const std::vector<FailurePattern>& failures) {
    auto have = text::word_set(label_text);
    std::string out = label_text;
    for (const auto& f : failures)
        for (const auto& w : content_words(f.note))
            if (have.insert(w).second) out += " " + w;
    return out;
}

Oracles Oracles::mock() {
    Oracles o;
    o.labeler = std::make_shared<MockLabeler>();
    o.matcher = std::make_shared<MockMatcher>();
    o.scorer = std::make_shared<MockScorer>();
    o.refiner = std::make_shared<MockRefiner>();
    return o;
}

DeepRag::DeepRag(const cee::ExceptionTree& tree, Oracles oracles, RagConfig config)
    : tree_(tree), oracles_(std::move(oracles)), config_(config) {
    if (config_.theta < 0.0 || config_.theta > 1.0)
        throw config_error("theta must be in [0,1]");
    if (config_.delta < 0.0 || config_.delta > 1.0)
        throw config_error("delta must be in [0,1]");
    if (config_.max_retrievals < 1)
        throw config_error("max_retrievals must be at least 1");
    if (!oracles_.labeler || !oracles_.matcher || !oracles_.scorer || !oracles_.refiner)
        throw config_error("all four deep-rag oracles must be provided");
}

void DeepRag::set_labels(std::vector<ScenarioLabel> labels) {
    for (const auto& l : labels) {
        if (l.label_text.empty())
            throw validation_error("empty label_text for branch " + l.branch_root);
        if (!tree_.contains(l.branch_root))
            throw validation_error("label names unknown branch root " + l.branch_root);
    }
    labels_ = std::move(labels);
}

const std::vector<ScenarioLabel>& DeepRag::assign_labels() {
    labels_.clear();
    for (const auto& branch : tree_.branches()) {
        ScenarioLabel l;
        l.branch_root = branch.branch_root;
        l.label_text = oracles_.labeler->label(tree_, branch);
        if (l.label_text.empty()) l.label_text = branch.branch_root;
        labels_.push_back(std::move(l));
    }
    return labels_;
}

std::set<std::string> DeepRag::identify_branches(const std::vector<Query>& queries) const {
    std::set<std::string> roots;
    for (const auto& label : labels_)
        for (const auto& q : queries)
            if (oracles_.matcher->matches(q.text, label.label_text)) {
                roots.insert(label.branch_root);
                break;
            }
    return roots;
}

VerifyResult DeepRag::verify_labels(const cee::Branch& branch,
                                    const std::vector<VerificationExample>& examples) const {
    if (examples.empty())
        throw validation_error("label verification over an empty example list");
    VerifyResult result;
    std::optional<std::set<std::string>> own{std::set<std::string>{branch.branch_root}};
    for (const auto& ex : examples) {
        bool passed =
            identify_branches({Query{ex.text, ""}}).count(branch.branch_root) > 0;
        bool accurate = false;
        for (const auto& r : retrieve(ex.text, {}, own)) {
            for (const auto& t : ex.truth_types)
                if (r.node == t ||
                    (tree_.contains(r.node) && tree_.contains(t) &&
                     tree_.is_subtype(r.node, t))) {
                    accurate = true;
                    break;
                }
            if (accurate) break;
        }
        result.mean_pass_rate += passed ? 1.0 : 0.0;
        result.mean_accuracy += accurate ? 1.0 : 0.0;
        if ((passed ? 1.0 : 0.0) < config_.theta) {
            result.failures.push_back(
                {branch.branch_root, ex.example_id, FailureKind::MissedBranch, ex.text});
        } else if ((accurate ? 1.0 : 0.0) < config_.theta) {
            result.failures.push_back(
                {branch.branch_root, ex.example_id, FailureKind::WrongBranch, ex.text});
        }
    }
    double n = static_cast<double>(examples.size());
    result.mean_pass_rate /= n;
    result.mean_accuracy /= n;
    return result;
}

VerificationContext DeepRag::verify_all(
    const std::vector<VerificationExample>& examples) const {
    VerificationContext ctx;
    for (const auto& branch : tree_.branches()) {
        std::vector<VerificationExample> relevant;
        for (const auto& ex : examples)
            if (ex.truth_branches.count(branch.branch_root)) relevant.push_back(ex);
        if (relevant.empty()) continue;
        auto vr = verify_labels(branch, relevant);
        ctx.per_branch_stats[branch.branch_root] = {vr.mean_pass_rate, vr.mean_accuracy};
        ctx.failure_patterns.insert(ctx.failure_patterns.end(), vr.failures.begin(),
                                    vr.failures.end());
    }
    return ctx;
}

int DeepRag::refine_labels(const VerificationContext& context) {
    int refined = 0;
    for (auto& label : labels_) {
        auto stats = context.per_branch_stats.find(label.branch_root);
        if (stats == context.per_branch_stats.end()) continue;
        if (stats->second.mean_pass_rate >= config_.theta &&
            stats->second.mean_accuracy >= config_.theta)
            continue;
        std::vector<FailurePattern> failures;
        for (const auto& f : context.failure_patterns)
            if (f.branch_root == label.branch_root) failures.push_back(f);
        if (failures.empty()) continue;
        if (label.granularity_rev >= config_.max_refine_rounds) {
            warnings_.push_back("refinement round limit reached for branch " +
                                label.branch_root + "; label kept as-is");
            continue;
        }
        label.label_text = oracles_.refiner->refine(label.label_text, failures);
        if (label.label_text.empty())
            throw validation_error("refiner produced an empty label for branch " +
                                   label.branch_root);
        ++label.granularity_rev;
        ++refined;
    }
    return refined;
}

VerificationContext DeepRag::calibrate(const std::vector<VerificationExample>& examples) {
    VerificationContext ctx = verify_all(examples);
    for (int round = 0; round < config_.max_refine_rounds; ++round) {
        if (refine_labels(ctx) == 0) break;
        ctx = verify_all(examples);
    }
    return ctx;
}

std::vector<Retrieval> DeepRag::retrieve(
    const std::string& summary, const std::vector<Query>& queries,
    const std::optional<std::set<std::string>>& restrict_branches,
    std::vector<std::string>* diagnostics) const {
    std::vector<Query> all_queries = queries;
    if (!text::trim(summary).empty()) all_queries.push_back({summary, ""});
    if (all_queries.empty()) return {};

    std::set<std::string> roots =
        restrict_branches ? *restrict_branches : identify_branches(all_queries);
    if (roots.empty()) return {};

    std::string query_text;
    for (const auto& q : all_queries) {
        if (!query_text.empty()) query_text += " ";
        query_text += q.text;
    }

    struct Candidate {
        std::string node;
        std::string branch_root;
        int depth = 0;
    };
    std::vector<Candidate> candidates;
    for (const auto& branch : tree_.branches()) {
        if (!roots.count(branch.branch_root)) continue;
        int root_depth = tree_.depth(branch.branch_root);
        for (const auto& name : branch.member_nodes) {
            int abs_depth = tree_.depth(name);
            int rel_depth = abs_depth - root_depth + 1;
            if (config_.depth_limit > 0 && rel_depth > config_.depth_limit) continue;
            candidates.push_back({name, branch.branch_root, abs_depth});
        }
    }

    struct Scored {
        double relevance = 0.0;
        bool ok = false;
        std::string error;
    };
    auto scored = parallel_map(candidates, config_.concurrency, [&](const Candidate& c) {
        Scored s;
        try {
            const auto& node = tree_.node(c.node);
            s.relevance = std::clamp(
                oracles_.scorer->score(node.name + " " + node.scenario + " " + node.property,
                                       query_text),
                0.0, 1.0);
            s.ok = true;
        } catch (const std::exception& e) {
            s.error = e.what();
        }
        return s;
    });

    std::vector<Retrieval> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!scored[i].ok) {
            if (diagnostics)
                diagnostics->push_back("scorer failed on node " + candidates[i].node +
                                       ": " + scored[i].error + "; node skipped");
            continue;
        }
        if (scored[i].relevance > config_.delta)
            out.push_back({candidates[i].node, scored[i].relevance, candidates[i].depth,
                           candidates[i].branch_root});
    }
    std::sort(out.begin(), out.end(), [](const Retrieval& a, const Retrieval& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        if (a.depth != b.depth) return a.depth > b.depth; // more specific first
        return a.node < b.node;
    });
    if (out.size() > static_cast<std::size_t>(config_.max_retrievals))
        out.resize(static_cast<std::size_t>(config_.max_retrievals));
    return out;
}

std::string labels_sidecar_path(const std::string& cee_path) {
    return cee_path + ".labels.json";
}

void save_labels(const std::string& path, const std::vector<ScenarioLabel>& labels,
                 const VerificationContext* report) {
    nlohmann::json doc;
    doc["version"] = 1;
    auto& arr = doc["labels"] = nlohmann::json::array();
    for (const auto& l : labels)
        arr.push_back({{"branch_root", l.branch_root},
                       {"label_text", l.label_text},
                       {"granularity_rev", l.granularity_rev}});
    if (report) {
        nlohmann::json v;
        auto& stats = v["per_branch_stats"] = nlohmann::json::object();
        for (const auto& [root, s] : report->per_branch_stats)
            stats[root] = {{"mean_pass_rate", s.mean_pass_rate},
                           {"mean_accuracy", s.mean_accuracy}};
        auto& failures = v["failure_patterns"] = nlohmann::json::array();
        for (const auto& f : report->failure_patterns)
            failures.push_back(
                {{"branch_root", f.branch_root},
                 {"example_id", f.example_id},
                 {"kind", f.kind == FailureKind::MissedBranch ? "missed_branch"
                                                              : "wrong_branch"},
                 {"note", f.note}});
        doc["verification"] = std::move(v);
    }
    text::write_file(path, doc.dump(2) + "\n");
}

std::vector<ScenarioLabel> load_labels(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("malformed labels file " + path + ": " + e.what());
    }
    if (!doc.contains("labels") || !doc["labels"].is_array())
        throw parse_error("labels file " + path + " lacks a \"labels\" array");
    std::vector<ScenarioLabel> out;
    for (const auto& item : doc["labels"]) {
        ScenarioLabel l;
        l.branch_root = item.value("branch_root", "");
        l.label_text = item.value("label_text", "");
        l.granularity_rev = item.value("granularity_rev", 0);
        if (l.branch_root.empty() || l.label_text.empty() || l.granularity_rev < 0)
            throw validation_error("invalid label entry in " + path);
        out.push_back(std::move(l));
    }
    return out;
}

} // namespace seeker::rag
