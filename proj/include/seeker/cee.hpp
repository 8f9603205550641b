#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seeker::cee {

// One exception type in the knowledge tree. Text fields mirror the
// interchange format's "info" block plus the scenario/property pair.
struct ExceptionNode {
    std::string name;
    std::vector<std::string> children;
    std::string definition;
    std::string reasons;
    std::string dangerous_operations;
    std::string sample_code;
    std::string handle_code;
    std::string handle_logic;
    std::string scenario;
    std::string property;
    // Nodes flagged complete must carry non-empty scenario/property/
    // handle_logic when they are leaves; incomplete nodes are reported by
    // validation but accepted.
    bool complete = false;
};

struct TreeManifest {
    int expected_node_count = 0;
    int expected_branch_count = 0;
    int expected_max_depth = 0;
    std::string version;
};

// A branch is the subtree rooted at a grandchild of the tree root.
// member_nodes lists the branch root first, then descendants ordered by
// (depth, name).
struct Branch {
    std::string branch_root;
    std::vector<std::string> member_nodes;
};

struct TreeStats {
    int node_count = 0;
    int branch_count = 0;
    int max_depth = 0; // root counts as layer 1
};

class ExceptionTree {
public:
    static ExceptionTree load(const std::string& path);
    static ExceptionTree from_json(const nlohmann::json& doc);
    static ExceptionTree parse(const std::string& text);

    nlohmann::json to_json() const;
    std::string serialize() const;

    const std::string& root() const { return root_; }
    const TreeManifest& manifest() const { return manifest_; }

    bool contains(const std::string& name) const;
    const ExceptionNode& node(const std::string& name) const;
    std::optional<std::string> parent(const std::string& name) const;

    // Chain of ancestors, nearest first, ending at the root. Empty for the
    // root itself.
    std::vector<std::string> ancestors(const std::string& name) const;

    // true iff a == b or b is an ancestor of a.
    bool is_subtype(const std::string& a, const std::string& b) const;

    // Depth from the root: root = 0, branch roots = 2.
    int depth(const std::string& name) const;

    // Branches ordered lexicographically by branch root.
    std::vector<Branch> branches() const;

    TreeStats stats() const;

    // Names of nodes flagged complete=false, for diagnostics.
    std::vector<std::string> incomplete_nodes() const;

    std::vector<std::string> node_names() const; // sorted

private:
    ExceptionTree() = default;
    void validate() const;

    std::string root_;
    TreeManifest manifest_;
    std::map<std::string, ExceptionNode> nodes_;
    std::map<std::string, std::string> parent_;
};

} // namespace seeker::cee
