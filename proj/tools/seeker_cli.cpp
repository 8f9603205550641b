// Command-line front end. All engine work goes through the C API in
// seeker.h; this file only parses arguments, resolves output locations, and
// maps statuses to exit codes (0 success, 1 domain failure, 2 fatal).
#include "seeker.h"

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code(seeker_status status) {
    switch (status) {
        case SEEKER_OK: return 0;
        case SEEKER_FAIL: return 1;
        default: return 2;
    }
}

void report_error(const seeker_engine* engine, seeker_status status) {
    if (status == SEEKER_OK) return;
    const char* message = seeker_last_error(engine);
    if (message && *message) std::cerr << "error: " << message << "\n";
}

// Owned C string with scoped release.
struct CStr {
    char* value = nullptr;
    ~CStr() { seeker_string_free(value); }
    std::string str() const { return value ? value : ""; }
};

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fragile-code analysis: detects exception-prone regions, retrieves "
                 "handling strategies from the exception knowledge base, and "
                 "synthesizes try-catch handling"};
    app.fallthrough();

    std::optional<std::string> config_file;
    std::optional<std::string> cee_path, labels_path, endpoint, model, out_dir;
    std::optional<double> alpha, beta, gamma, delta, theta;
    std::optional<int> depth, max_unit_lines, concurrency;
    bool mock_flag = false;
    bool print_config = false;

    app.add_option("--config", config_file, "Configuration file (JSON)");
    app.add_option("--cee", cee_path, "Exception knowledge-base file");
    app.add_option("--labels", labels_path, "Branch-label sidecar file");
    app.add_option("--alpha", alpha, "Likelihood weight");
    app.add_option("--beta", beta, "Suitability weight");
    app.add_option("--gamma", gamma, "Application threshold (strict >)");
    app.add_option("--delta", delta, "Retrieval relevance threshold");
    app.add_option("--theta", theta, "Label verification threshold");
    app.add_option("--depth", depth, "Retrieval depth limit (0 = unlimited)");
    app.add_option("--max-unit-lines", max_unit_lines, "Maximum lines per code unit");
    app.add_option("--concurrency", concurrency, "Concurrent units / oracle calls");
    app.add_flag("--mock", mock_flag, "Use the offline deterministic model");
    app.add_option("--endpoint", endpoint, "Chat-completion endpoint (implies live mode)");
    app.add_option("--model", model, "Model identifier");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--print-config", print_config, "Print the effective configuration");

    std::string analyze_input;
    auto* cmd_analyze = app.add_subcommand("analyze", "Analyze a .java file or directory");
    cmd_analyze->add_option("input", analyze_input, "Input file or directory")->required();

    std::string evaluate_dir;
    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "Score the pipeline against a stripped corpus");
    cmd_evaluate->add_option("corpus", evaluate_dir, "Corpus directory")->required();

    auto* cmd_cee = app.add_subcommand("cee", "Knowledge-base utilities");
    cmd_cee->require_subcommand(1);
    auto* cee_validate = cmd_cee->add_subcommand("validate", "Check knowledge-base integrity");
    std::string query_name;
    auto* cee_query = cmd_cee->add_subcommand("query", "Print one exception node");
    cee_query->add_option("name", query_name, "Exception type name")->required();
    auto* cee_stats = cmd_cee->add_subcommand("stats", "Print node/branch/depth counts");

    auto* cmd_corpus = app.add_subcommand("corpus", "Corpus construction utilities");
    cmd_corpus->require_subcommand(1);
    std::string strip_input;
    auto* corpus_strip =
        cmd_corpus->add_subcommand("strip", "Strip handlers into fragile variants (--out)");
    corpus_strip->add_option("input", strip_input, "Directory of .java files")->required();
    std::string repos_path, weights_json;
    auto* corpus_score = cmd_corpus->add_subcommand("score", "Rank repositories by quality");
    corpus_score->add_option("repos", repos_path, "Repository metadata JSON")->required();
    corpus_score->add_option("--weights", weights_json, "Dimension weights as JSON");

    CLI11_PARSE(app, argc, argv);

    json flags = json::object();
    if (cee_path) flags["cee"] = *cee_path;
    if (labels_path) flags["labels"] = *labels_path;
    if (alpha) flags["alpha"] = *alpha;
    if (beta) flags["beta"] = *beta;
    if (gamma) flags["gamma"] = *gamma;
    if (delta) flags["delta"] = *delta;
    if (theta) flags["theta"] = *theta;
    if (depth) flags["depth"] = *depth;
    if (max_unit_lines) flags["max_unit_lines"] = *max_unit_lines;
    if (concurrency) flags["concurrency"] = *concurrency;
    if (mock_flag) flags["mock"] = true;
    if (endpoint) flags["endpoint"] = *endpoint;
    if (model) flags["model"] = *model;
    if (out_dir) flags["out"] = *out_dir;

    json options = json::object();
    if (config_file) options["config_file"] = *config_file;
    options["flags"] = flags;

    seeker_engine* engine = nullptr;
    auto status = seeker_engine_create(options.dump().c_str(), &engine);
    if (status != SEEKER_OK) {
        report_error(nullptr, status);
        return 2;
    }

    std::string effective_out;
    {
        CStr cfg;
        status = seeker_effective_config(engine, &cfg.value);
        if (status != SEEKER_OK) {
            report_error(engine, status);
            seeker_engine_destroy(engine);
            return exit_code(status);
        }
        auto doc = json::parse(cfg.str());
        effective_out = doc.value("out", "");
        if (print_config) std::cout << cfg.str() << "\n";
    }

    int rc = 0;
    if (cmd_analyze->parsed()) {
        CStr report;
        status = seeker_analyze(engine, analyze_input.c_str(),
                                effective_out.empty() ? nullptr : effective_out.c_str(),
                                &report.value);
        if (report.value) std::cout << report.str() << "\n";
        report_error(engine, status);
        rc = exit_code(status);
    } else if (cmd_evaluate->parsed()) {
        CStr report, table;
        status = seeker_evaluate(engine, evaluate_dir.c_str(), &report.value, &table.value);
        if (table.value) std::cout << table.str();
        if (status == SEEKER_OK && !effective_out.empty()) {
            write_text(fs::path(effective_out) / "metrics.json", report.str() + "\n");
            write_text(fs::path(effective_out) / "metrics.txt", table.str());
        }
        report_error(engine, status);
        rc = exit_code(status);
    } else if (cee_validate->parsed()) {
        CStr diagnostics;
        status = seeker_cee_validate(engine, &diagnostics.value);
        if (diagnostics.value && *diagnostics.value) std::cerr << diagnostics.str();
        if (status == SEEKER_OK) std::cout << "ok\n";
        rc = exit_code(status);
    } else if (cee_query->parsed()) {
        CStr node;
        status = seeker_cee_query(engine, query_name.c_str(), &node.value);
        if (node.value) std::cout << node.str() << "\n";
        report_error(engine, status);
        rc = exit_code(status);
    } else if (cee_stats->parsed()) {
        CStr line;
        status = seeker_cee_stats(engine, &line.value);
        if (line.value) std::cout << line.str() << "\n";
        report_error(engine, status);
        rc = exit_code(status);
    } else if (corpus_strip->parsed()) {
        if (effective_out.empty()) {
            std::cerr << "error: corpus strip requires --out\n";
            rc = 2;
        } else {
            CStr manifest;
            status = seeker_corpus_strip(engine, strip_input.c_str(), effective_out.c_str(),
                                         &manifest.value);
            if (manifest.value) std::cout << manifest.str() << "\n";
            report_error(engine, status);
            rc = exit_code(status);
        }
    } else if (corpus_score->parsed()) {
        CStr table;
        status = seeker_corpus_score(engine, repos_path.c_str(),
                                     weights_json.empty() ? nullptr : weights_json.c_str(),
                                     &table.value);
        if (table.value) std::cout << table.str();
        report_error(engine, status);
        rc = exit_code(status);
    } else if (!print_config) {
        std::cerr << app.help();
        rc = 2;
    }

    seeker_engine_destroy(engine);
    return rc;
}
