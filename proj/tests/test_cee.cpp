#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "seeker/cee.hpp"
#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <string>

using seeker::Error;
using seeker::cee::Branch;
using seeker::cee::ExceptionTree;

namespace {

const std::string kFixtures = SEEKER_FIXTURE_DIR;
const std::string kData = SEEKER_DATA_DIR;

ExceptionTree mini() { return ExceptionTree::load(kFixtures + "/mini_cee.json"); }

// Independent oracle: recompute node count / branch count / max depth from
// the raw JSON document, without going through ExceptionTree.
struct RawCounts {
    int nodes = 0;
    int branches = 0;
    int max_depth = 0;
};

void raw_walk(const nlohmann::json& node, int depth, RawCounts& rc) {
    rc.nodes += 1;
    rc.max_depth = std::max(rc.max_depth, depth);
    if (depth == 3) rc.branches += 1;
    for (const auto& c : node.at("children"))
        if (c.is_object()) raw_walk(c, depth + 1, rc);
}

RawCounts raw_counts(const std::string& path) {
    auto doc = nlohmann::json::parse(seeker::text::read_file(path));
    RawCounts rc;
    raw_walk(doc.at("root"), 1, rc);
    return rc;
}

// Independent parent-map oracle for ancestor chains.
void build_parent_map(const nlohmann::json& node, const std::string& parent,
                      std::map<std::string, std::string>& pm) {
    std::string name = node.at("name");
    if (!parent.empty()) pm[name] = parent;
    for (const auto& c : node.at("children"))
        if (c.is_object()) build_parent_map(c, name, pm);
}

} // namespace

TEST_CASE("load: bundled sample node carries the IOException scenario") {
    auto tree = mini();
    CHECK(tree.node("IOException").scenario ==
          "attempt to read from or write to a file/stream/network connection");
}

TEST_CASE("load: single-node tree") {
    auto tree = ExceptionTree::parse(R"({"root": {"name": "Throwable", "children": []}})");
    CHECK(tree.stats().node_count == 1);
    CHECK(tree.stats().branch_count == 0);
    CHECK(tree.stats().max_depth == 1);
    CHECK(tree.branches().empty());
    CHECK(tree.ancestors("Throwable").empty());
}

TEST_CASE("load: mini fixture counts match an independent traversal") {
    auto rc = raw_counts(kFixtures + "/mini_cee.json");
    CHECK(rc.nodes == 7);
    CHECK(rc.branches == 2);
    CHECK(rc.max_depth == 3);
    auto s = mini().stats();
    CHECK(s.node_count == rc.nodes);
    CHECK(s.branch_count == rc.branches);
    CHECK(s.max_depth == rc.max_depth);
}

TEST_CASE("load errors") {
    CHECK_THROWS_AS(ExceptionTree::parse("{not json"), Error);
    CHECK_THROWS_WITH_AS(ExceptionTree::load(kFixtures + "/bad_cee_duplicate.json"),
                         doctest::Contains("duplicate node name: IOException"), Error);
    CHECK_THROWS_WITH_AS(ExceptionTree::load(kFixtures + "/bad_cee_dangling.json"),
                         doctest::Contains("dangling child reference 'PhantomException'"),
                         Error);
    CHECK_THROWS_AS(ExceptionTree::load(kFixtures + "/bad_cee_cycle.json"), Error);
}

TEST_CASE("ancestors") {
    auto tree = mini();
    CHECK(tree.ancestors("IOException") ==
          std::vector<std::string>{"Exception", "Throwable"});
    CHECK(tree.ancestors("Throwable").empty());
    CHECK_THROWS_AS(tree.ancestors("NoSuchNode"), Error);

    // every node's chain agrees with a parent-pointer walk over the raw JSON
    auto doc = nlohmann::json::parse(seeker::text::read_file(kFixtures + "/mini_cee.json"));
    std::map<std::string, std::string> pm;
    build_parent_map(doc.at("root"), "", pm);
    for (const auto& name : tree.node_names()) {
        std::vector<std::string> expect;
        std::string cur = name;
        while (pm.count(cur)) {
            expect.push_back(pm.at(cur));
            cur = pm.at(cur);
        }
        CHECK(tree.ancestors(name) == expect);
    }
}

TEST_CASE("ancestors: full tree SQLClientInfoException chain") {
    auto tree = ExceptionTree::load(kData + "/cee.json");
    CHECK(tree.ancestors("SQLClientInfoException") ==
          std::vector<std::string>{"SQLException", "Exception", "Throwable"});
}

TEST_CASE("is_subtype") {
    auto tree = ExceptionTree::load(kData + "/cee.json");
    CHECK(tree.is_subtype("SQLClientInfoException", "SQLException"));
    CHECK_FALSE(tree.is_subtype("SQLException", "SQLClientInfoException"));
    for (const auto& name : mini().node_names()) CHECK(mini().is_subtype(name, name));
    CHECK_THROWS_AS(tree.is_subtype("SQLException", "NoSuchNode"), Error);
}

TEST_CASE("is_subtype: antisymmetry and root on the mini tree") {
    auto tree = mini();
    auto names = tree.node_names();
    for (const auto& a : names) {
        CHECK(tree.is_subtype(a, tree.root()));
        for (const auto& b : names) {
            if (tree.is_subtype(a, b) && tree.is_subtype(b, a)) CHECK(a == b);
        }
    }
}

TEST_CASE("branches: full tree has 62, membership partitions deep nodes") {
    auto tree = ExceptionTree::load(kData + "/cee.json");
    auto bs = tree.branches();
    CHECK(bs.size() == 62);

    std::set<std::string> covered;
    for (const auto& b : bs) {
        for (const auto& m : b.member_nodes) {
            CHECK(covered.insert(m).second); // pairwise disjoint
        }
    }
    // union plus root and depth-1 nodes equals all nodes
    std::size_t shallow = 1 + tree.node(tree.root()).children.size();
    CHECK(covered.size() + shallow == static_cast<std::size_t>(tree.stats().node_count));

    // deterministic lexicographic order by branch root
    for (std::size_t i = 1; i < bs.size(); ++i)
        CHECK(bs[i - 1].branch_root < bs[i].branch_root);
}

TEST_CASE("branches: mini membership equals depth-2-rooted subtree enumeration") {
    auto tree = mini();
    auto bs = tree.branches();
    REQUIRE(bs.size() == 2);
    CHECK(bs[0].branch_root == "IOException");
    CHECK(bs[1].branch_root == "SQLException");

    // oracle: members are exactly the nodes whose ancestor chain contains the
    // branch root (or the root itself)
    for (const auto& b : bs) {
        std::set<std::string> expect{b.branch_root};
        for (const auto& name : tree.node_names()) {
            auto chain = tree.ancestors(name);
            if (std::find(chain.begin(), chain.end(), b.branch_root) != chain.end())
                expect.insert(name);
        }
        std::set<std::string> got(b.member_nodes.begin(), b.member_nodes.end());
        CHECK(got == expect);
    }
}

TEST_CASE("stats on the full CEE") {
    auto tree = ExceptionTree::load(kData + "/cee.json");
    auto s = tree.stats();
    CHECK(s.node_count == 433);
    CHECK(s.branch_count == 62);
    CHECK(s.max_depth == 5);

    auto rc = raw_counts(kData + "/cee.json");
    CHECK(rc.nodes == 433);
    CHECK(rc.branches == 62);
    CHECK(rc.max_depth == 5);
}

TEST_CASE("manifest mismatch is a validation error") {
    CHECK_THROWS_WITH_AS(
        ExceptionTree::parse(
            R"({"manifest": {"expected_node_count": 5, "expected_branch_count": 0,
                "expected_max_depth": 1},
                "root": {"name": "Throwable", "children": []}})"),
        doctest::Contains("manifest expects 5 nodes"), Error);
}

TEST_CASE("serialize/load round-trip is identity") {
    auto tree = mini();
    auto again = ExceptionTree::parse(tree.serialize());
    CHECK(again.serialize() == tree.serialize());
    CHECK(again.stats().node_count == tree.stats().node_count);
    CHECK(again.node("IOException").handle_logic == tree.node("IOException").handle_logic);

    auto full = ExceptionTree::load(kData + "/cee.json");
    CHECK(ExceptionTree::parse(full.serialize()).serialize() == full.serialize());
}

TEST_CASE("incomplete nodes are reported, not rejected") {
    auto full = ExceptionTree::load(kData + "/cee.json");
    auto inc = full.incomplete_nodes();
    CHECK(!inc.empty());
    CHECK(mini().incomplete_nodes().empty());
}
