#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "seeker/cee.hpp"
#include "seeker/code_model.hpp"
#include "seeker/text_util.hpp"

#include <set>
#include <string>

using namespace seeker;
using namespace seeker::code;

namespace {

const std::string kData = SEEKER_DATA_DIR;
const std::string kFixtures = SEEKER_FIXTURE_DIR;

const std::string kFragileSample =
    "String fileName = \"nonexistentfile.txt\";\n"
    "FileReader fileReader = new FileReader(fileName);\n";

const std::string kHandledSample =
    "String fileName = \"nonexistentfile.txt\";\n"
    "try {\n"
    "    FileReader fileReader = new FileReader(fileName);\n"
    "} catch (IOException ex) {\n"
    "    System.out.println(\"An error occurred while processing the file \" + fileName);\n"
    "    ex.printStackTrace();\n"
    "}\n";

CodeUnit unit_of(const std::string& source) {
    CodeUnit u;
    u.unit_id = "test#u1";
    u.file = "test.java";
    u.source = source;
    u.span = {1, static_cast<int>(text::split_lines(source).size())};
    u.kind = CodeUnit::Kind::FunctionBlock;
    return u;
}

const cee::ExceptionTree& tree() {
    static auto t = cee::ExceptionTree::load(kData + "/cee.json");
    return t;
}

const KnownThrows& known() {
    static auto k = KnownThrows::load(kData + "/known_throws.json");
    return k;
}

std::string method_lines(const std::string& name, int body_lines) {
    std::string out = "    void " + name + "() {\n";
    for (int i = 0; i < body_lines; ++i)
        out += "        int v" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
    out += "    }\n";
    return out;
}

} // namespace

TEST_CASE("parse_unit: fragile sample has a constructor call site, no try blocks") {
    auto pr = parse_unit(unit_of(kFragileSample));
    CHECK(pr.try_blocks.empty());
    bool ctor = false;
    for (const auto& cs : pr.call_sites)
        if (cs.callee == "FileReader" && cs.line == 2) ctor = true;
    CHECK(ctor);
}

TEST_CASE("parse_unit: handled sample yields one try block catching IOException") {
    auto pr = parse_unit(unit_of(kHandledSample));
    REQUIRE(pr.try_blocks.size() == 1);
    const auto& tb = pr.try_blocks[0];
    CHECK(tb.try_line == 2);
    CHECK(tb.try_span == LineSpan{3, 3});
    REQUIRE(tb.catch_clauses.size() == 1);
    CHECK(tb.catch_clauses[0].exception == "IOException");
    CHECK(tb.catch_clauses[0].handler_span == LineSpan{5, 6});
    CHECK_FALSE(tb.finally_span.has_value());
}

TEST_CASE("parse_unit: empty unit gives empty lists") {
    auto pr = parse_unit(unit_of(""));
    CHECK(pr.methods.empty());
    CHECK(pr.try_blocks.empty());
    CHECK(pr.call_sites.empty());
    CHECK(pr.throw_sites.empty());
}

TEST_CASE("parse_unit: methods with params, throws clause, and throw sites") {
    std::string src =
        "class T {\n"
        "    int sum(int a, int b) throws IOException, SQLException {\n"
        "        if (a < 0) {\n"
        "            throw new IllegalArgumentException(\"neg\");\n"
        "        }\n"
        "        return a + b;\n"
        "    }\n"
        "}\n";
    auto pr = parse_unit(unit_of(src));
    REQUIRE(pr.methods.size() == 1);
    CHECK(pr.methods[0].name == "sum");
    CHECK(pr.methods[0].param_count == 2);
    CHECK(pr.methods[0].declared_throws ==
          std::vector<std::string>{"IOException", "SQLException"});
    CHECK(pr.methods[0].body_span == LineSpan{3, 6});
    REQUIRE(pr.throw_sites.size() == 1);
    CHECK(pr.throw_sites[0].exception == "IllegalArgumentException");
    CHECK(pr.throw_sites[0].line == 4);
}

TEST_CASE("parse_unit: multi-catch and finally") {
    std::string src =
        "try {\n"
        "    work();\n"
        "} catch (IOException | SQLException e) {\n"
        "    log(e);\n"
        "} finally {\n"
        "    close();\n"
        "}\n";
    auto pr = parse_unit(unit_of(src));
    REQUIRE(pr.try_blocks.size() == 1);
    const auto& tb = pr.try_blocks[0];
    REQUIRE(tb.catch_clauses.size() == 2);
    CHECK(tb.catch_clauses[0].exception == "IOException");
    CHECK(tb.catch_clauses[1].exception == "SQLException");
    REQUIRE(tb.finally_span.has_value());
    CHECK(*tb.finally_span == LineSpan{6, 6});
    CHECK(tb.close_line == 7);
}

TEST_CASE("parse_unit: unbalanced source degrades instead of failing") {
    auto pr = parse_source("class X {\n  void m( {\n  }\n}\n");
    CHECK(pr.degraded);
    CHECK(!pr.diagnostics.empty());
}

TEST_CASE("segment: three 150-line methods at max 200 give three units") {
    std::string src = "class Big {\n";
    src += method_lines("a", 148) + method_lines("b", 148) + method_lines("c", 148);
    src += "}\n";
    Codebase cb{{{"Big.java", src}}};
    auto units = segment(cb, 200);
    REQUIRE(units.size() == 3);
    int covered = 0;
    for (const auto& u : units) covered += u.span.lines();
    CHECK(covered == static_cast<int>(text::split_lines(src).size()));
}

TEST_CASE("segment: empty file yields no units") {
    Codebase cb{{{"Empty.java", ""}}};
    CHECK(segment(cb, 200).empty());
}

TEST_CASE("segment: small single-method file is one unit spanning the file") {
    std::string src =
        "class S {\n"
        "    int id(int x) {\n"
        "        return x;\n"
        "    }\n"
        "}\n";
    Codebase cb{{{"S.java", src}}};
    auto units = segment(cb, 200);
    REQUIRE(units.size() == 1);
    CHECK(units[0].span == LineSpan{1, 5});
}

TEST_CASE("segment: partition property on a mixed file") {
    std::string src = "package demo;\n\nclass Mixed {\n";
    src += method_lines("a", 30) + method_lines("b", 90) + method_lines("c", 70);
    src += "}\n";
    Codebase cb{{{"Mixed.java", src}}};
    auto units = segment(cb, 100);
    int total = static_cast<int>(text::split_lines(src).size());
    std::set<int> seen;
    for (const auto& u : units) {
        CHECK(u.span.lines() <= 100 + 0); // no unit beyond the limit here
        for (int l = u.span.start; l <= u.span.end; ++l) CHECK(seen.insert(l).second);
    }
    CHECK(static_cast<int>(seen.size()) == total);
    // every unit re-parses standalone
    for (const auto& u : units) CHECK_FALSE(parse_unit(u).degraded);
}

TEST_CASE("build_cfg: straight-line method is a chain of 3 nodes, 2 edges") {
    std::string src =
        "class T {\n"
        "    void m() {\n"
        "        int a = 1;\n"
        "        int b = 2;\n"
        "        int c = a + b;\n"
        "    }\n"
        "}\n";
    auto cfg = build_cfg(unit_of(src));
    CHECK(cfg.nodes.size() == 3);
    REQUIRE(cfg.edges.size() == 2);
    CHECK(cfg.edges[0] == std::pair<int, int>{0, 1});
    CHECK(cfg.edges[1] == std::pair<int, int>{1, 2});
}

TEST_CASE("build_cfg: if/else forms a diamond with 4 edges") {
    std::string src =
        "class T {\n"
        "    void m(int x) {\n"
        "        if (x > 0) {\n"
        "            a();\n"
        "        } else {\n"
        "            b();\n"
        "        }\n"
        "        c();\n"
        "    }\n"
        "}\n";
    auto cfg = build_cfg(unit_of(src));
    REQUIRE(cfg.nodes.size() == 4);
    CHECK(cfg.nodes[0].kind == "branch");
    std::set<std::pair<int, int>> edges(cfg.edges.begin(), cfg.edges.end());
    CHECK(edges == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("build_cfg: loop has a back edge") {
    std::string src =
        "class T {\n"
        "    void m(int x) {\n"
        "        while (x > 0) {\n"
        "            x = x - 1;\n"
        "        }\n"
        "    }\n"
        "}\n";
    auto cfg = build_cfg(unit_of(src));
    REQUIRE(cfg.nodes.size() == 2);
    CHECK(cfg.nodes[0].kind == "loop");
    std::set<std::pair<int, int>> edges(cfg.edges.begin(), cfg.edges.end());
    CHECK(edges == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("build_cfg: every try node gets an edge to the catch head") {
    std::string src =
        "class T {\n"
        "    void m() {\n"
        "        try {\n"
        "            a();\n"
        "            b();\n"
        "        } catch (IOException e) {\n"
        "            h();\n"
        "        }\n"
        "    }\n"
        "}\n";
    auto cfg = build_cfg(unit_of(src));
    int catch_id = -1;
    for (const auto& n : cfg.nodes)
        if (n.kind == "catch") catch_id = n.id;
    REQUIRE(catch_id >= 0);
    std::set<std::pair<int, int>> edges(cfg.edges.begin(), cfg.edges.end());
    CHECK(edges.count({0, catch_id}) == 1); // a()
    CHECK(edges.count({1, catch_id}) == 1); // b()
}

TEST_CASE("build_epg: declared throws propagate to the unit boundary") {
    std::string src =
        "class T {\n"
        "    void a() {\n"
        "        b();\n"
        "    }\n"
        "    void b() throws IOException {\n"
        "        doIt();\n"
        "    }\n"
        "}\n";
    auto u = unit_of(src);
    auto pr = parse_unit(u);
    auto epg = build_epg(u, pr, tree(), known());
    int boundary_edges = 0;
    for (const auto& e : epg.edges)
        if (e.to_boundary && e.exception == "IOException") {
            CHECK(epg.nodes.at(e.from).line == 3);
            ++boundary_edges;
        }
    CHECK(boundary_edges == 1);
}

TEST_CASE("build_epg: a catching try absorbs the propagation") {
    std::string src =
        "class T {\n"
        "    void a() {\n"
        "        try {\n"
        "            b();\n"
        "        } catch (IOException e) {\n"
        "            log(e);\n"
        "        }\n"
        "    }\n"
        "    void b() throws IOException {\n"
        "        doIt();\n"
        "    }\n"
        "}\n";
    auto u = unit_of(src);
    auto pr = parse_unit(u);
    auto epg = build_epg(u, pr, tree(), known());
    for (const auto& e : epg.edges) CHECK_FALSE(e.to_boundary);
    bool caught = false;
    for (const auto& e : epg.edges)
        if (e.exception == "IOException" && epg.nodes.at(e.to).site == "catch")
            caught = true;
    CHECK(caught);
}

TEST_CASE("build_epg: supertype catch absorbs a subtype throw") {
    std::string src =
        "try {\n"
        "    conn.setClientInfo(props);\n"
        "} catch (SQLException e) {\n"
        "    log(e);\n"
        "}\n";
    auto u = unit_of(src);
    auto pr = parse_unit(u);
    auto epg = build_epg(u, pr, tree(), known());
    bool routed = false;
    for (const auto& e : epg.edges)
        if (e.exception == "SQLClientInfoException") {
            CHECK_FALSE(e.to_boundary);
            routed = true;
        }
    CHECK(routed);
}

TEST_CASE("build_epg: no calls or throws gives an empty graph") {
    std::string src =
        "class T {\n"
        "    int m() {\n"
        "        int a = 1;\n"
        "        return a;\n"
        "    }\n"
        "}\n";
    auto u = unit_of(src);
    auto pr = parse_unit(u);
    auto epg = build_epg(u, pr, tree(), known());
    CHECK(epg.edges.empty());
}

TEST_CASE("static segments: fragile sample is flagged with IOException") {
    auto u = unit_of(kFragileSample);
    auto pr = parse_unit(u);
    auto segs = static_sensitive_segments(u, build_epg(u, pr, tree(), known()));
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].span == LineSpan{2, 2});
    CHECK(segs[0].suspected_exceptions == std::vector<std::string>{"IOException"});
}

TEST_CASE("static segments: handled sample yields none") {
    auto u = unit_of(kHandledSample);
    auto pr = parse_unit(u);
    CHECK(static_sensitive_segments(u, build_epg(u, pr, tree(), known())).empty());
}

TEST_CASE("static segments: consecutive fragile lines merge into one span") {
    std::string src =
        "class T {\n"
        "    void m() {\n"
        "        FileReader r = new FileReader(name);\n"
        "        String line = r.readLine();\n"
        "        done();\n"
        "        int n = Integer.parseInt(line);\n"
        "    }\n"
        "}\n";
    auto u = unit_of(src);
    auto pr = parse_unit(u);
    auto segs = static_sensitive_segments(u, build_epg(u, pr, tree(), known()));
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].span == LineSpan{3, 4});
    CHECK(segs[0].suspected_exceptions == std::vector<std::string>{"IOException"});
    CHECK(segs[1].span == LineSpan{6, 6});
    CHECK(segs[1].suspected_exceptions ==
          std::vector<std::string>{"NumberFormatException"});
}

TEST_CASE("known throws table loads and matches case-insensitively") {
    CHECK(known().size() > 20);
    auto m = known().match("  FileReader r = new filereader(x);");
    REQUIRE(m.size() == 1);
    CHECK(m[0] == "IOException");
    CHECK(known().match("int a = b + c;").empty());
}
