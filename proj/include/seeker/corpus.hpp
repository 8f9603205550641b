#pragma once

#include "seeker/code_model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seeker::corpus {

// One ground-truth try-catch block, with spans in fragile-source coordinates.
struct GtBlock {
    code::LineSpan try_span; // former try-body lines
    std::vector<std::string> types;
    std::string handler_text; // original try..catch[..finally] statement text
};

// A deleted scaffolding/handler chunk and where it re-inserts into the
// fragile text: all lines of the chunk go immediately before fragile line
// `before` (fragile line count + 1 appends at the end). Chunks sharing a
// `before` apply in ascending original_start order.
struct RestoreInsertion {
    int before = 1;
    int original_start = 1; // first original line of the chunk, for ordering
    std::vector<std::string> lines;
};

struct GroundTruth {
    std::string snippet_id;
    std::string original_source;
    std::string fragile_source;
    std::vector<GtBlock> blocks;
    std::set<int> sensitive_lines; // fragile lines formerly inside a try body
    std::vector<RestoreInsertion> insertions;

    nlohmann::json to_json() const;
    static GroundTruth from_json(const nlohmann::json& doc);
};

// Removes every try/catch/finally in the source: scaffolding and handler
// lines are dropped, try-body statements stay in place, finally bodies stay
// after the body. Requires scaffolding on its own lines (`try {`,
// `} catch (...) {`, `} finally {`, closing `}`). Throws on sources the
// parser can only handle degraded. Try blocks nested inside a removed
// handler are removed with it and not recorded.
GroundTruth strip_handlers(const std::string& source, const std::string& snippet_id = "");

// Re-inserts the recorded chunks; the result equals original_source
// byte-for-byte (modulo trailing-newline normalization).
std::string restore(const GroundTruth& gt);

void save_ground_truth(const std::string& path, const GroundTruth& gt);
GroundTruth load_ground_truth(const std::string& path);

// ----- Composite Quality Metric ------------------------------------------

enum class Tri { Yes, No, Unknown };

struct RepoMeta {
    std::string name;
    long commits = 0;
    long stars = 0;
    long forks = 0;
    std::optional<long> issue_fix; // nullopt = unknown
    Tri doc = Tri::Unknown;
    Tri under_maintenance = Tri::Unknown;
};

std::vector<RepoMeta> load_repos(const std::string& path);

struct CqmScore {
    std::string name;
    double score = 0.0;
};

// Dimensions: commits, stars, forks, issue_fix, doc, under_maintenance.
const std::vector<std::string>& cqm_dimensions();

std::map<std::string, double> default_cqm_weights(); // all 1.0

// Numeric dimensions are min-max normalized across the input set (equal min
// and max, including the single-repo case, normalizes to 1.0); yes/no map to
// 1/0 and unknown to 0.5; score = sum(w * normalized) / sum(w). Result is
// sorted by score descending, then name. Throws on empty input, negative or
// unknown-dimension weights, or an all-zero weight vector.
std::vector<CqmScore> cqm(const std::vector<RepoMeta>& repos,
                          const std::map<std::string, double>& weights);

// ----- Corpus manifest ----------------------------------------------------

struct ManifestEntry {
    std::string id;
    std::string file; // file name within the corpus directory
    std::string hash; // fnv1a64 of the file content
    std::string truth_file; // empty when no sidecar exists
    std::string truth_hash;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries; // sorted by id
    std::vector<std::string> diagnostics;

    nlohmann::json to_json() const;
    std::string serialize() const;
    static CorpusManifest load(const std::string& path);
};

// Indexes every readable .java file in the directory (non-recursive);
// unreadable files are skipped with a diagnostic. Deterministic: re-running
// on an unchanged directory serializes byte-identically.
CorpusManifest build_manifest(const std::string& dir);

} // namespace seeker::corpus
