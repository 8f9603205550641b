#include "seeker/cee.hpp"

#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace seeker::cee {

namespace {

std::string get_text(const json& obj, const char* field) {
    if (!obj.contains(field)) return "";
    const auto& v = obj.at(field);
    if (v.is_null()) return "";
    if (!v.is_string())
        throw parse_error(std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

} // namespace

ExceptionTree ExceptionTree::load(const std::string& path) {
    std::string content = text::read_file(path);
    try {
        return parse(content);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

ExceptionTree ExceptionTree::parse(const std::string& content) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    return from_json(doc);
}

ExceptionTree ExceptionTree::from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("root"))
        throw parse_error("document must be an object with a 'root' node");

    ExceptionTree tree;
    if (doc.contains("manifest")) {
        const auto& m = doc.at("manifest");
        tree.manifest_.expected_node_count = m.value("expected_node_count", 0);
        tree.manifest_.expected_branch_count = m.value("expected_branch_count", 0);
        tree.manifest_.expected_max_depth = m.value("expected_max_depth", 0);
        tree.manifest_.version = m.value("version", "");
    }

    // Children may be inline node objects or string references to a node
    // defined inline elsewhere in the document. References are resolved
    // after the walk so dangling names and double parents are reportable.
    std::vector<std::pair<std::string, std::string>> ref_edges; // parent -> child name

    std::function<std::string(const json&)> walk = [&](const json& jn) -> std::string {
        if (!jn.is_object() || !jn.contains("name"))
            throw parse_error("node object missing 'name'");
        ExceptionNode node;
        node.name = jn.at("name").get<std::string>();
        if (node.name.empty()) throw validation_error("node with empty name");
        if (tree.nodes_.count(node.name))
            throw validation_error("duplicate node name: " + node.name);
        node.scenario = get_text(jn, "scenario");
        node.property = get_text(jn, "property");
        node.complete = jn.value("complete", false);
        if (jn.contains("info")) {
            const auto& info = jn.at("info");
            node.definition = get_text(info, "definition");
            node.reasons = get_text(info, "reasons");
            node.dangerous_operations = get_text(info, "dangerous_operations");
            node.sample_code = get_text(info, "sample_code");
            node.handle_code = get_text(info, "handle_code");
            node.handle_logic = get_text(info, "handle_logic");
        }
        tree.nodes_.emplace(node.name, node);
        std::vector<std::string> child_names;
        if (jn.contains("children")) {
            for (const auto& c : jn.at("children")) {
                if (c.is_string()) {
                    ref_edges.emplace_back(node.name, c.get<std::string>());
                    child_names.push_back(c.get<std::string>());
                } else {
                    std::string cname = walk(c);
                    child_names.push_back(cname);
                    tree.parent_.emplace(cname, node.name);
                }
            }
        }
        tree.nodes_.at(node.name).children = std::move(child_names);
        return jn.at("name").get<std::string>();
    };

    tree.root_ = walk(doc.at("root"));

    for (const auto& [parent, child] : ref_edges) {
        if (!tree.nodes_.count(child))
            throw validation_error("dangling child reference '" + child +
                                   "' under node '" + parent + "'");
        if (tree.parent_.count(child))
            throw validation_error("node '" + child + "' has more than one parent ('" +
                                   tree.parent_.at(child) + "' and '" + parent + "')");
        if (child == tree.root_)
            throw validation_error("root node '" + child + "' listed as a child of '" +
                                   parent + "'");
        tree.parent_.emplace(child, parent);
    }

    tree.validate();
    return tree;
}

void ExceptionTree::validate() const {
    // Reachability from root plus the single-parent checks above make the
    // graph a tree; a cycle or orphan shows up as an unreachable node.
    std::set<std::string> seen;
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
        if (seen.count(name))
            throw validation_error("cycle detected at node '" + name + "'");
        seen.insert(name);
        for (const auto& c : nodes_.at(name).children) visit(c);
    };
    visit(root_);
    if (seen.size() != nodes_.size()) {
        for (const auto& [name, n] : nodes_) {
            if (!seen.count(name))
                throw validation_error("node '" + name + "' is not reachable from root");
        }
    }
    for (const auto& [name, n] : nodes_) {
        if (n.complete && n.children.empty()) {
            if (n.scenario.empty() || n.property.empty() || n.handle_logic.empty())
                throw validation_error(
                    "leaf node '" + name +
                    "' is flagged complete but misses scenario/property/handle_logic");
        }
    }
    if (manifest_.expected_node_count > 0) {
        auto s = stats();
        if (s.node_count != manifest_.expected_node_count)
            throw validation_error("manifest expects " +
                                   std::to_string(manifest_.expected_node_count) +
                                   " nodes, tree has " + std::to_string(s.node_count));
        if (manifest_.expected_branch_count != s.branch_count)
            throw validation_error("manifest expects " +
                                   std::to_string(manifest_.expected_branch_count) +
                                   " branches, tree has " + std::to_string(s.branch_count));
        if (manifest_.expected_max_depth != s.max_depth)
            throw validation_error("manifest expects depth " +
                                   std::to_string(manifest_.expected_max_depth) +
                                   ", tree has " + std::to_string(s.max_depth));
    }
}

json ExceptionTree::to_json() const {
    std::function<json(const std::string&)> emit = [&](const std::string& name) -> json {
        const auto& n = nodes_.at(name);
        json jn;
        jn["name"] = n.name;
        json kids = json::array();
        for (const auto& c : n.children) kids.push_back(emit(c));
        jn["children"] = kids;
        jn["info"] = {
            {"definition", n.definition},
            {"reasons", n.reasons},
            {"dangerous_operations", n.dangerous_operations},
            {"sample_code", n.sample_code},
            {"handle_code", n.handle_code},
            {"handle_logic", n.handle_logic},
        };
        jn["scenario"] = n.scenario;
        jn["property"] = n.property;
        jn["complete"] = n.complete;
        return jn;
    };
    json doc;
    doc["manifest"] = {
        {"expected_node_count", manifest_.expected_node_count},
        {"expected_branch_count", manifest_.expected_branch_count},
        {"expected_max_depth", manifest_.expected_max_depth},
        {"version", manifest_.version},
    };
    doc["root"] = emit(root_);
    return doc;
}

std::string ExceptionTree::serialize() const { return to_json().dump(2); }

bool ExceptionTree::contains(const std::string& name) const {
    return nodes_.count(name) != 0;
}

const ExceptionNode& ExceptionTree::node(const std::string& name) const {
    auto it = nodes_.find(name);
    if (it == nodes_.end()) throw lookup_error("unknown exception node: " + name);
    return it->second;
}

std::optional<std::string> ExceptionTree::parent(const std::string& name) const {
    node(name); // existence check
    auto it = parent_.find(name);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> ExceptionTree::ancestors(const std::string& name) const {
    node(name);
    std::vector<std::string> chain;
    std::string cur = name;
    while (true) {
        auto it = parent_.find(cur);
        if (it == parent_.end()) break;
        chain.push_back(it->second);
        cur = it->second;
    }
    return chain;
}

bool ExceptionTree::is_subtype(const std::string& a, const std::string& b) const {
    node(b);
    if (a == b) return true;
    auto chain = ancestors(a);
    return std::find(chain.begin(), chain.end(), b) != chain.end();
}

int ExceptionTree::depth(const std::string& name) const {
    return static_cast<int>(ancestors(name).size());
}

std::vector<Branch> ExceptionTree::branches() const {
    std::vector<std::string> roots;
    for (const auto& level1 : nodes_.at(root_).children)
        for (const auto& level2 : nodes_.at(level1).children) roots.push_back(level2);
    std::sort(roots.begin(), roots.end());

    std::vector<Branch> out;
    for (const auto& r : roots) {
        Branch b;
        b.branch_root = r;
        // breadth-first by (depth, name) so member order is deterministic
        std::vector<std::pair<int, std::string>> members;
        std::function<void(const std::string&, int)> collect = [&](const std::string& n,
                                                                   int d) {
            members.emplace_back(d, n);
            for (const auto& c : nodes_.at(n).children) collect(c, d + 1);
        };
        collect(r, 1);
        std::sort(members.begin(), members.end());
        for (auto& [d, n] : members) b.member_nodes.push_back(n);
        out.push_back(std::move(b));
    }
    return out;
}

TreeStats ExceptionTree::stats() const {
    TreeStats s;
    s.node_count = static_cast<int>(nodes_.size());
    int max_d = 0;
    std::function<void(const std::string&, int)> visit = [&](const std::string& n, int d) {
        max_d = std::max(max_d, d);
        for (const auto& c : nodes_.at(n).children) visit(c, d + 1);
    };
    visit(root_, 1);
    s.max_depth = max_d;
    int branch_count = 0;
    for (const auto& level1 : nodes_.at(root_).children)
        branch_count += static_cast<int>(nodes_.at(level1).children.size());
    s.branch_count = branch_count;
    return s;
}

std::vector<std::string> ExceptionTree::incomplete_nodes() const {
    std::vector<std::string> out;
    for (const auto& [name, n] : nodes_)
        if (!n.complete) out.push_back(name);
    return out;
}

std::vector<std::string> ExceptionTree::node_names() const {
    std::vector<std::string> out;
    out.reserve(nodes_.size());
    for (const auto& [name, n] : nodes_) out.push_back(name);
    return out;
}

} // namespace seeker::cee
