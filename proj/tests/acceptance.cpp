// Acceptance gate: ten checks, one PASS/FAIL line each. Exit code = number
// of failing checks.
#include "seeker/cee.hpp"
#include "seeker/code_model.hpp"
#include "seeker/corpus.hpp"
#include "seeker/deep_rag.hpp"
#include "seeker/gateway.hpp"
#include "seeker/metrics.hpp"
#include "seeker/pipeline.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace seeker;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kData = SEEKER_DATA_DIR;
const std::string kFixtures = SEEKER_FIXTURE_DIR;
const std::string kCli = SEEKER_CLI_PATH;

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
    if (!ok && !detail.empty()) std::cout << " — " << detail;
    std::cout << "\n" << std::flush;
    if (!ok) ++g_failures;
}

// Independent oracle: full-matrix Levenshtein distance.
int lev_oracle(const std::string& a, const std::string& b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

metrics::EvalBlock block(int start, int end, std::vector<std::string> types) {
    metrics::EvalBlock b;
    b.try_span = {start, end};
    b.types = std::move(types);
    return b;
}

pipeline::Pipeline make_pipeline(const cee::ExceptionTree& tree,
                                 pipeline::PipelineConfig cfg = {}) {
    auto rules = gateway::MockRules::load(kData + "/mock_rules.json");
    auto gw = std::make_shared<gateway::Gateway>(
        std::make_shared<gateway::MockTransport>(rules), gateway::GatewayOptions{});
    return pipeline::Pipeline(tree, code::KnownThrows::load(kData + "/known_throws.json"),
                              gw, rag::Oracles::mock(), cfg);
}

// Runs the CLI, capturing stdout and the exit code.
std::pair<int, std::string> run_cli(const std::string& args) {
    std::string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct DelayScorer : rag::RelevanceScorer {
    std::shared_ptr<rag::RelevanceScorer> inner = rag::Oracles::mock().scorer;
    std::atomic<int> calls{0};
    double score(const std::string& node_text, const std::string& query_text) override {
        ++calls;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        return inner->score(node_text, query_text);
    }
};

} // namespace

int main() {
    const auto tree = cee::ExceptionTree::load(kData + "/cee.json");
    const auto mini = cee::ExceptionTree::load(kFixtures + "/mini_cee.json");

    criterion(1, "edit_similarity matches a DP Levenshtein oracle on 1000 pairs in <10s",
              [&](std::string& detail) {
        std::mt19937 rng(20240817);
        std::uniform_int_distribution<int> len(0, 200);
        std::uniform_int_distribution<int> ch(0, 26);
        auto make = [&] {
            std::string s(len(rng), ' ');
            for (auto& c : s) { int v = ch(rng); c = v == 26 ? ' ' : char('a' + v); }
            return s;
        };
        auto start = Clock::now();
        for (int i = 0; i < 1000; ++i) {
            auto a = make(), b = make();
            double expected = (a.empty() && b.empty())
                                  ? 1.0
                                  : 1.0 - lev_oracle(a, b) /
                                              static_cast<double>(std::max(a.size(), b.size()));
            if (metrics::edit_similarity(a, b) != expected) {
                detail = "mismatch on pair " + std::to_string(i);
                return false;
            }
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (secs >= 10.0) { detail = "took " + std::to_string(secs) + "s"; return false; }
        return true;
    });

    criterion(2, "acc subtype predicate agrees with an ancestor-walk oracle on all mini-CEE pairs",
              [&](std::string& detail) {
        auto names = mini.node_names();
        for (const auto& a : names)
            for (const auto& b : names) {
                bool oracle = a == b;
                for (auto p = mini.parent(a); !oracle && p; p = mini.parent(*p))
                    oracle = (*p == b);
                double got = metrics::acc({block(1, 1, {a})}, {block(1, 1, {b})}, mini);
                if (got != (oracle ? 1.0 : 0.0)) {
                    detail = a + " vs " + b;
                    return false;
                }
            }
        return true;
    });

    criterion(3, "COV-P arithmetic: 2-exact-plus-1-spurious = 2/3, identity = 1.0, off-by-one = 0.0",
              [&](std::string&) {
        auto a1 = {block(1, 2, {"X"}), block(5, 6, {"X"})};
        auto p1 = {block(1, 2, {"X"}), block(5, 6, {"X"}), block(9, 9, {"X"})};
        auto ident = {block(3, 7, {"X"})};
        auto off = {block(2, 3, {"X"})};
        auto actual_off = {block(1, 3, {"X"})};
        return metrics::cov_p(p1, a1) == 2.0 / 3.0 && metrics::cov_p(ident, ident) == 1.0 &&
               metrics::cov_p(off, actual_off) == 0.0;
    });

    // shared by criteria 4 and 10
    fs::path corpus_dir = "/tmp/seeker_acceptance_corpus";
    std::map<std::string, corpus::GroundTruth> truths;
    pipeline::EvaluationOutcome outcome;
    bool corpus_ready = false;

    criterion(4, "mock round-trip repair: COV=1.0 on >=16/20 snippets, subtype-correct, re-parses, <60s",
              [&](std::string& detail) {
        fs::remove_all(corpus_dir);
        fs::create_directories(corpus_dir);
        for (const auto& entry : fs::directory_iterator(kData + "/corpus")) {
            if (entry.path().extension() != ".java") continue;
            auto stem = entry.path().stem().string();
            auto gt = corpus::strip_handlers(text::read_file(entry.path().string()), stem);
            text::write_file((corpus_dir / entry.path().filename()).string(),
                             gt.fragile_source);
            corpus::save_ground_truth((corpus_dir / (stem + ".truth.json")).string(), gt);
            truths[stem] = gt;
        }
        auto manifest = corpus::build_manifest(corpus_dir.string());
        text::write_file((corpus_dir / "manifest.json").string(), manifest.serialize());

        auto start = Clock::now();
        auto pipe = make_pipeline(tree);
        metrics::MockReview review;
        outcome = pipeline::evaluate_corpus(corpus_dir.string(), pipe, review);
        double secs = std::chrono::duration<double>(Clock::now() - start).count();

        int covered = 0;
        for (const auto& s : outcome.report.per_snippet)
            if (s.cov == 1.0) ++covered;
        if (covered < 16) { detail = "covered " + std::to_string(covered); return false; }
        for (const auto& rec : outcome.records) {
            std::set<std::string> gt_types;
            for (const auto& b : truths.at(rec.snippet_id).blocks)
                gt_types.insert(b.types.begin(), b.types.end());
            for (const auto& pb : rec.predicted_blocks)
                for (const auto& t : pb.types) {
                    bool ok = false;
                    for (const auto& g : gt_types) ok = ok || tree.is_subtype(t, g);
                    if (!ok) { detail = rec.snippet_id + " applied " + t; return false; }
                }
            if (code::parse_source(rec.generated_code).degraded) {
                detail = rec.snippet_id + " does not re-parse";
                return false;
            }
        }
        if (secs >= 60.0) { detail = "took " + std::to_string(secs) + "s"; return false; }
        corpus_ready = true;
        return true;
    });

    criterion(5, "grade = alpha*l + beta*u exactly, documented ordering, zero applications at gamma=1.0",
              [&](std::string& detail) {
        code::Codebase base;
        for (const char* name : {"s03_probe_client.java", "s19_record_splitter.java"}) {
            auto gt = corpus::strip_handlers(text::read_file(kData + "/corpus/" + name), name);
            base.files.push_back({name, gt.fragile_source});
        }
        auto pipe = make_pipeline(tree);
        auto [optimized, report] = pipe.run(base);
        bool saw_candidates = false;
        for (const auto& u : report.units) {
            for (std::size_t i = 0; i < u.candidates.size(); ++i) {
                const auto& c = u.candidates[i];
                saw_candidates = true;
                if (c.grade != 0.5 * c.likelihood + 0.5 * c.suitability) {
                    detail = "grade formula violated for " + c.exception;
                    return false;
                }
                if (i > 0) {
                    const auto& prev = u.candidates[i - 1];
                    auto key = [&](const pipeline::ExceptionCandidate& x) {
                        return std::make_tuple(-x.grade, -tree.depth(x.exception),
                                               x.exception, x.segment_id);
                    };
                    if (key(prev) > key(c)) {
                        detail = "ordering violated at " + c.exception;
                        return false;
                    }
                }
            }
        }
        if (!saw_candidates) { detail = "no candidates produced"; return false; }

        pipeline::PipelineConfig strict;
        strict.gamma = 1.0;
        auto [opt2, rep2] = make_pipeline(tree, strict).run(base);
        if (rep2.applied_total() != 0) { detail = "applications at gamma=1.0"; return false; }
        for (std::size_t i = 0; i < base.files.size(); ++i)
            if (opt2.files[i].content != text::join_lines(text::split_lines(base.files[i].content))) {
                detail = "source changed at gamma=1.0";
                return false;
            }
        return true;
    });

    criterion(6, "Deep-RAG retrieval identical sequential vs 8-way concurrent on 50 random query sets",
              [&](std::string& detail) {
        rag::RagConfig seq_cfg, par_cfg;
        seq_cfg.concurrency = 1;
        par_cfg.concurrency = 8;
        rag::DeepRag seq(tree, rag::Oracles::mock(), seq_cfg);
        rag::DeepRag par(tree, rag::Oracles::mock(), par_cfg);
        seq.assign_labels();
        par.assign_labels();

        std::vector<std::string> vocab;
        for (const auto& name : tree.node_names()) {
            vocab.push_back(name);
            for (const auto& w : text::words(tree.node(name).scenario)) vocab.push_back(w);
            if (vocab.size() > 4000) break;
        }
        std::mt19937 rng(424242);
        std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
        std::uniform_int_distribution<int> n_queries(1, 3), n_words(3, 8);
        for (int set = 0; set < 50; ++set) {
            std::vector<rag::Query> queries;
            for (int q = 0; q < n_queries(rng); ++q) {
                std::string qtext;
                for (int w = 0; w < n_words(rng); ++w)
                    qtext += (qtext.empty() ? "" : " ") + vocab[pick(rng)];
                queries.push_back({qtext, ""});
            }
            auto a = seq.retrieve("", queries);
            auto b = par.retrieve("", queries);
            bool equal = a.size() == b.size();
            for (std::size_t i = 0; equal && i < a.size(); ++i)
                equal = a[i].node == b[i].node && a[i].relevance == b[i].relevance &&
                        a[i].depth == b[i].depth && a[i].branch_root == b[i].branch_root;
            if (!equal) { detail = "divergence on set " + std::to_string(set); return false; }
        }
        return true;
    });

    criterion(7, "concurrency 8 with a 50ms-per-node scorer over 62 branches is >=4x faster than sequential",
              [&](std::string& detail) {
        std::set<std::string> all_roots;
        for (const auto& b : tree.branches()) all_roots.insert(b.branch_root);
        std::vector<rag::Query> queries = {{"file stream network database connection", ""}};

        auto timed = [&](int concurrency, int& calls) {
            auto scorer = std::make_shared<DelayScorer>();
            auto oracles = rag::Oracles::mock();
            oracles.scorer = scorer;
            rag::RagConfig cfg;
            cfg.concurrency = concurrency;
            cfg.depth_limit = 1; // branch roots only: one 50ms evaluation per branch
            rag::DeepRag rag(tree, oracles, cfg);
            rag.assign_labels();
            auto start = Clock::now();
            rag.retrieve("", queries, all_roots);
            calls = scorer->calls.load();
            return std::chrono::duration<double>(Clock::now() - start).count();
        };
        int calls_seq = 0, calls_par = 0;
        double t_seq = timed(1, calls_seq);
        double t_par = timed(8, calls_par);
        if (calls_seq != 62 || calls_par != 62) {
            detail = "scored " + std::to_string(calls_seq) + "/" + std::to_string(calls_par) +
                     " nodes, expected 62";
            return false;
        }
        if (t_seq < 4.0 * t_par) {
            detail = "speedup " + std::to_string(t_seq / t_par);
            return false;
        }
        return true;
    });

    criterion(8, "CLI cee stats reports 433 nodes, 62 branches, depth 5 and cee validate passes",
              [&](std::string& detail) {
        auto [stats_rc, stats_out] = run_cli("--cee " + kData + "/cee.json cee stats");
        if (stats_rc != 0 || stats_out != "433 nodes, 62 branches, depth 5\n") {
            detail = "stats rc=" + std::to_string(stats_rc) + " out=" + stats_out;
            return false;
        }
        auto [val_rc, val_out] = run_cli("--cee " + kData + "/cee.json cee validate");
        if (val_rc != 0) { detail = "validate rc=" + std::to_string(val_rc); return false; }
        return true;
    });

    criterion(9, "units of a 2000-line file are <=200 lines, partition it, and re-parse standalone",
              [&](std::string& detail) {
        std::ostringstream source;
        source << "public class Big {\n";
        int line_count = 1;
        for (int m = 0; line_count < 1992; ++m) {
            source << "    int method" << m << "(int x) {\n"
                   << "        int a = x + " << m << ";\n"
                   << "        int b = a * 2;\n"
                   << "        if (b > 10) {\n"
                   << "            b = b - 1;\n"
                   << "        }\n"
                   << "        int c = b + a;\n"
                   << "        return c;\n"
                   << "    }\n";
            line_count += 9;
        }
        source << "}\n";
        ++line_count;
        code::Codebase base;
        base.files.push_back({"Big.java", source.str()});
        auto units = code::segment(base, 200);
        int expected_next = 1;
        for (const auto& u : units) {
            if (u.span.lines() > 200) { detail = u.unit_id + " too long"; return false; }
            if (u.span.start != expected_next) { detail = "gap before " + u.unit_id; return false; }
            expected_next = u.span.end + 1;
            if (code::parse_unit(u).degraded) {
                detail = u.unit_id + " does not re-parse";
                return false;
            }
        }
        if (expected_next != line_count + 1) { detail = "units do not cover the file"; return false; }
        return units.size() > 1;
    });

    criterion(10, "second analysis pass over the repaired corpus applies zero strategies",
              [&](std::string& detail) {
        if (!corpus_ready) { detail = "criterion 4 prerequisites missing"; return false; }
        auto pipe = make_pipeline(tree);
        code::Codebase repaired;
        for (const auto& rec : outcome.records)
            repaired.files.push_back({rec.snippet_id + ".java", rec.generated_code});
        auto [opt, rep] = pipe.run(repaired);
        if (rep.applied_total() != 0) {
            detail = std::to_string(rep.applied_total()) + " applications on pass 2";
            return false;
        }
        for (std::size_t i = 0; i < repaired.files.size(); ++i)
            if (opt.files[i].content !=
                text::join_lines(text::split_lines(repaired.files[i].content))) {
                detail = repaired.files[i].path + " changed on pass 2";
                return false;
            }
        return true;
    });

    fs::remove_all(corpus_dir);
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(g_failures))
              << "\n";
    return g_failures;
}
