#include "seeker.h"

#include "seeker/cee.hpp"
#include "seeker/config.hpp"
#include "seeker/corpus.hpp"
#include "seeker/deep_rag.hpp"
#include "seeker/errors.hpp"
#include "seeker/gateway.hpp"
#include "seeker/metrics.hpp"
#include "seeker/pipeline.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seeker;

struct seeker_engine {
    cfg::RunConfig config;
    std::string last_error;

    std::optional<cee::ExceptionTree> tree;
    std::shared_ptr<gateway::Gateway> gw;
    std::unique_ptr<pipeline::Pipeline> pipe;

    const cee::ExceptionTree& get_tree() {
        if (!tree) tree = cee::ExceptionTree::load(config.cee_path);
        return *tree;
    }

    std::shared_ptr<gateway::Gateway> get_gateway() {
        if (!gw) {
            std::shared_ptr<gateway::Transport> transport;
            if (config.mock) {
                transport = std::make_shared<gateway::MockTransport>(
                    gateway::MockRules::load(config.effective_mock_rules()));
            } else {
                transport = std::make_shared<gateway::HttpTransport>(
                    config.endpoint, config.model, config.api_key);
            }
            gateway::GatewayOptions options;
            options.model_id = config.model;
            options.concurrency_limit = config.concurrency;
            gw = std::make_shared<gateway::Gateway>(transport, options);
        }
        return gw;
    }

    pipeline::Pipeline& get_pipeline() {
        if (!pipe) {
            pipeline::PipelineConfig pc;
            pc.alpha = config.alpha;
            pc.beta = config.beta;
            pc.gamma = config.gamma;
            pc.rag.delta = config.delta;
            pc.rag.theta = config.theta;
            pc.rag.depth_limit = config.depth_limit;
            pc.rag.concurrency = config.concurrency;
            pc.max_unit_lines = config.max_unit_lines;
            pc.concurrency = config.concurrency;
            pipe = std::make_unique<pipeline::Pipeline>(
                get_tree(), code::KnownThrows::load(config.effective_known_throws()),
                get_gateway(), rag::Oracles::mock(), pc);
            if (auto labels = config.effective_labels(); !labels.empty())
                pipe->deep_rag().set_labels(rag::load_labels(labels));
        }
        return *pipe;
    }
};

namespace {

thread_local std::string g_thread_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs the operation, translating exceptions into status codes. Every error
// is fatal unless the caller opted specific kinds into the domain-failure
// code (validation problems in `cee validate`, unknown names in `cee query`).
template <typename F>
seeker_status guarded(seeker_engine* engine, F&& op,
                      std::initializer_list<Error::Kind> fail_kinds = {}) {
    if (!engine) return SEEKER_INVALID_ARGUMENT;
    engine->last_error.clear();
    try {
        return op();
    } catch (const Error& err) {
        engine->last_error = err.what();
        for (auto kind : fail_kinds)
            if (err.kind() == kind) return SEEKER_FAIL;
        return SEEKER_FATAL;
    } catch (const std::exception& ex) {
        engine->last_error = ex.what();
        return SEEKER_FATAL;
    }
}

code::Codebase load_codebase(const std::string& input) {
    fs::path root(input);
    if (!fs::exists(root)) throw io_error("input path does not exist: " + input);
    code::Codebase base;
    if (fs::is_regular_file(root)) {
        base.files.push_back({root.filename().string(), text::read_file(input)});
        return base;
    }
    if (!fs::is_directory(root)) throw io_error("input is neither file nor directory: " + input);
    std::vector<std::string> paths;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            paths.push_back(fs::relative(entry.path(), root).generic_string());
    std::sort(paths.begin(), paths.end());
    for (const auto& rel : paths)
        base.files.push_back({rel, text::read_file((root / rel).string())});
    return base;
}

void write_under(const fs::path& base, const std::string& rel, const std::string& content) {
    fs::path target = base / rel;
    fs::create_directories(target.parent_path());
    text::write_file(target.string(), content);
}

} // namespace

extern "C" {

seeker_status seeker_engine_create(const char* options_json, seeker_engine** out_engine) {
    if (!out_engine) return SEEKER_INVALID_ARGUMENT;
    *out_engine = nullptr;
    try {
        std::optional<std::string> config_file;
        json flags = json::object();
        if (options_json && *options_json) {
            json options = json::parse(options_json);
            if (!options.is_object())
                throw config_error("engine options must be a JSON object");
            if (options.contains("config_file"))
                config_file = options.at("config_file").get<std::string>();
            if (options.contains("flags")) flags = options.at("flags");
        }
        auto engine = std::make_unique<seeker_engine>();
        engine->config = cfg::resolve_from_process_env(config_file, flags);
        *out_engine = engine.release();
        return SEEKER_OK;
    } catch (const json::exception& e) {
        g_thread_error = std::string("engine options: ") + e.what();
        return SEEKER_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_thread_error = e.what();
        return SEEKER_FATAL;
    }
}

void seeker_engine_destroy(seeker_engine* engine) { delete engine; }

const char* seeker_last_error(const seeker_engine* engine) {
    return engine ? engine->last_error.c_str() : g_thread_error.c_str();
}

seeker_status seeker_effective_config(seeker_engine* engine, char** out_json) {
    if (!out_json) return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        *out_json = dup_string(engine->config.to_json().dump(2));
        return SEEKER_OK;
    });
}

seeker_status seeker_analyze(seeker_engine* engine, const char* input_path,
                             const char* out_dir, char** out_report_json) {
    if (!input_path || !out_report_json) return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        auto& pipe = engine->get_pipeline();
        auto base = load_codebase(input_path);
        auto [optimized, report] = pipe.run(base);
        if (out_dir && *out_dir) {
            fs::path out(out_dir);
            for (const auto& file : optimized.files)
                write_under(out / "optimized", file.path, file.content);
            for (const auto& [path, diff] : report.diffs)
                write_under(out / "diffs", path + ".diff", diff);
            write_under(out, "report.json", report.to_json().dump(2) + "\n");
        }
        *out_report_json = dup_string(report.to_json().dump(2));
        return report.any_failure() ? SEEKER_FAIL : SEEKER_OK;
    });
}

seeker_status seeker_evaluate(seeker_engine* engine, const char* corpus_dir,
                              char** out_report_json, char** out_table_text) {
    if (!corpus_dir || !out_report_json || !out_table_text)
        return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        auto& pipe = engine->get_pipeline();
        metrics::MockReview review;
        auto outcome = pipeline::evaluate_corpus(corpus_dir, pipe, review);
        json doc = outcome.report.to_json();
        doc["warnings"] = outcome.warnings;
        *out_report_json = dup_string(doc.dump(2));
        *out_table_text = dup_string(outcome.report.table_text());
        return SEEKER_OK;
    });
}

seeker_status seeker_cee_stats(seeker_engine* engine, char** out_line) {
    if (!out_line) return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        auto stats = engine->get_tree().stats();
        std::ostringstream line;
        line << stats.node_count << " nodes, " << stats.branch_count << " branches, depth "
             << stats.max_depth;
        *out_line = dup_string(line.str());
        return SEEKER_OK;
    });
}

seeker_status seeker_cee_validate(seeker_engine* engine, char** out_diagnostics) {
    if (!out_diagnostics) return SEEKER_INVALID_ARGUMENT;
    return guarded(
        engine,
        [&]() -> seeker_status {
            try {
                const auto& tree = engine->get_tree();
                std::string diagnostics;
                if (auto incomplete = tree.incomplete_nodes(); !incomplete.empty())
                    diagnostics = std::to_string(incomplete.size()) +
                                  " nodes without full scenario/property/handling text "
                                  "(accepted)\n";
                *out_diagnostics = dup_string(diagnostics);
                return SEEKER_OK;
            } catch (const Error& err) {
                if (err.kind() != Error::Kind::Validation && err.kind() != Error::Kind::Parse)
                    throw;
                engine->last_error = err.what();
                *out_diagnostics = dup_string(std::string(err.what()) + "\n");
                return SEEKER_FAIL;
            }
        });
}

seeker_status seeker_cee_query(seeker_engine* engine, const char* node_name,
                               char** out_node_json) {
    if (!node_name || !out_node_json) return SEEKER_INVALID_ARGUMENT;
    return guarded(
        engine,
        [&] {
            const auto& tree = engine->get_tree();
            if (!tree.contains(node_name))
                throw lookup_error(std::string("unknown exception node: ") + node_name);
            const auto& node = tree.node(node_name);
            json doc = {{"name", node.name},
                        {"children", node.children},
                        {"definition", node.definition},
                        {"reasons", node.reasons},
                        {"dangerous_operations", node.dangerous_operations},
                        {"sample_code", node.sample_code},
                        {"handle_code", node.handle_code},
                        {"handle_logic", node.handle_logic},
                        {"scenario", node.scenario},
                        {"property", node.property},
                        {"complete", node.complete},
                        {"depth", tree.depth(node.name)}};
            if (auto parent = tree.parent(node.name)) doc["parent"] = *parent;
            *out_node_json = dup_string(doc.dump(2));
            return SEEKER_OK;
        },
        {Error::Kind::Lookup});
}

seeker_status seeker_corpus_strip(seeker_engine* engine, const char* input_dir,
                                  const char* out_dir, char** out_manifest_json) {
    if (!input_dir || !out_dir || !out_manifest_json) return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        fs::path in(input_dir);
        if (!fs::is_directory(in)) throw io_error(std::string("not a directory: ") + input_dir);
        fs::create_directories(out_dir);
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(in))
            if (entry.is_regular_file() && entry.path().extension() == ".java")
                names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        std::vector<std::string> skipped;
        for (const auto& name : names) {
            std::string stem = fs::path(name).stem().string();
            try {
                auto gt = corpus::strip_handlers(text::read_file((in / name).string()), stem);
                text::write_file((fs::path(out_dir) / name).string(), gt.fragile_source);
                corpus::save_ground_truth(
                    (fs::path(out_dir) / (stem + ".truth.json")).string(), gt);
            } catch (const Error& err) {
                skipped.push_back(name + ": " + err.what());
            }
        }
        auto manifest = corpus::build_manifest(out_dir);
        text::write_file((fs::path(out_dir) / "manifest.json").string(),
                         manifest.serialize());
        json doc = manifest.to_json();
        for (const auto& note : skipped) doc["diagnostics"].push_back("skipped " + note);
        *out_manifest_json = dup_string(doc.dump(2));
        return SEEKER_OK;
    });
}

seeker_status seeker_corpus_score(seeker_engine* engine, const char* repos_path,
                                  const char* weights_json, char** out_table_text) {
    if (!repos_path || !out_table_text) return SEEKER_INVALID_ARGUMENT;
    return guarded(engine, [&] {
        auto repos = corpus::load_repos(repos_path);
        auto weights = corpus::default_cqm_weights();
        if (weights_json && *weights_json) {
            json doc = json::parse(weights_json);
            weights.clear();
            for (const auto& [key, value] : doc.items()) weights[key] = value.get<double>();
        }
        auto scores = corpus::cqm(repos, weights);
        std::ostringstream table;
        table.setf(std::ios::fixed);
        table.precision(4);
        for (const auto& s : scores) table << s.name << " " << s.score << "\n";
        *out_table_text = dup_string(table.str());
        return SEEKER_OK;
    });
}

long seeker_transport_calls(const seeker_engine* engine) {
    return engine && engine->gw ? engine->gw->transport_calls() : 0;
}

long seeker_network_calls(const seeker_engine* engine) {
    if (!engine || !engine->gw) return 0;
    return engine->config.mock ? 0 : engine->gw->transport_calls();
}

void seeker_string_free(char* s) { std::free(s); }

const char* seeker_version(void) { return "0.1.0"; }

} // extern "C"
