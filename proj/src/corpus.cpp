#include "seeker/corpus.hpp"

#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace seeker::corpus {

namespace {

json span_to_json(const code::LineSpan& s) { return json::array({s.start, s.end}); }

code::LineSpan span_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw parse_error("line span must be a [start, end] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

} // namespace

nlohmann::json GroundTruth::to_json() const {
    json doc;
    doc["snippet_id"] = snippet_id;
    doc["original_source"] = original_source;
    doc["fragile_source"] = fragile_source;
    auto& blocks_j = doc["blocks"] = json::array();
    for (const auto& b : blocks)
        blocks_j.push_back({{"try_span", span_to_json(b.try_span)},
                            {"types", b.types},
                            {"handler_text", b.handler_text}});
    doc["sensitive_lines"] = sensitive_lines;
    auto& ins_j = doc["insertions"] = json::array();
    for (const auto& i : insertions)
        ins_j.push_back({{"before", i.before},
                         {"original_start", i.original_start},
                         {"lines", i.lines}});
    return doc;
}

GroundTruth GroundTruth::from_json(const nlohmann::json& doc) {
    GroundTruth gt;
    try {
        gt.snippet_id = doc.at("snippet_id").get<std::string>();
        gt.original_source = doc.at("original_source").get<std::string>();
        gt.fragile_source = doc.at("fragile_source").get<std::string>();
        for (const auto& b : doc.at("blocks")) {
            GtBlock gb;
            gb.try_span = span_from_json(b.at("try_span"));
            gb.types = b.at("types").get<std::vector<std::string>>();
            gb.handler_text = b.at("handler_text").get<std::string>();
            gt.blocks.push_back(std::move(gb));
        }
        gt.sensitive_lines = doc.at("sensitive_lines").get<std::set<int>>();
        for (const auto& i : doc.at("insertions")) {
            RestoreInsertion ri;
            ri.before = i.at("before").get<int>();
            ri.original_start = i.at("original_start").get<int>();
            ri.lines = i.at("lines").get<std::vector<std::string>>();
            gt.insertions.push_back(std::move(ri));
        }
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed ground-truth record: ") + e.what());
    }
    return gt;
}

GroundTruth strip_handlers(const std::string& source, const std::string& snippet_id) {
    auto parsed = code::parse_source(source);
    if (parsed.degraded) {
        std::string detail =
            parsed.diagnostics.empty() ? "degraded parse" : parsed.diagnostics.front();
        throw parse_error("cannot strip handlers: " + detail);
    }
    auto lines = text::split_lines(source);
    const int n = static_cast<int>(lines.size());

    GroundTruth gt;
    gt.snippet_id = snippet_id;
    gt.original_source = text::join_lines(lines);

    auto blocks = parsed.try_blocks;
    std::sort(blocks.begin(), blocks.end(),
              [](const code::TryBlock& a, const code::TryBlock& b) {
                  return a.try_line < b.try_line;
              });

    std::vector<bool> deleted(static_cast<std::size_t>(n) + 1, false);
    struct PendingChunk {
        int first = 0, last = 0; // original lines, inclusive
    };
    struct PendingBlock {
        code::TryBlock tb;
        std::vector<PendingChunk> chunks; // prefix, mid, [suffix]
    };
    std::vector<PendingBlock> recorded;

    for (const auto& tb : blocks) {
        if (tb.try_line < 1 || tb.close_line > n) continue;
        // a block inside an already-removed handler vanishes with it
        if (deleted[static_cast<std::size_t>(tb.try_line)]) continue;

        int mid_start = tb.close_line; // fallback: bare try
        if (!tb.catch_clauses.empty()) {
            mid_start = tb.catch_clauses.front().clause_line;
            for (const auto& cc : tb.catch_clauses)
                mid_start = std::min(mid_start, cc.clause_line);
        }
        if (tb.finally_line > 0) mid_start = std::min(mid_start, tb.finally_line);

        PendingBlock pb;
        pb.tb = tb;
        pb.chunks.push_back({tb.try_line, tb.try_line});
        if (tb.finally_line > 0 && tb.finally_span) {
            pb.chunks.push_back({mid_start, tb.finally_line});
            pb.chunks.push_back({tb.close_line, tb.close_line});
        } else {
            pb.chunks.push_back({mid_start, tb.close_line});
        }
        for (const auto& c : pb.chunks)
            for (int l = c.first; l <= c.last; ++l)
                deleted[static_cast<std::size_t>(l)] = true;
        recorded.push_back(std::move(pb));
    }

    // fragile line number of each kept original line
    std::vector<int> fragile_pos(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::string> fragile;
    for (int l = 1; l <= n; ++l) {
        if (deleted[static_cast<std::size_t>(l)]) continue;
        fragile.push_back(lines[static_cast<std::size_t>(l - 1)]);
        fragile_pos[static_cast<std::size_t>(l)] = static_cast<int>(fragile.size());
    }
    gt.fragile_source = text::join_lines(fragile);
    const int fragile_n = static_cast<int>(fragile.size());

    auto first_kept_after = [&](int original_line) {
        for (int l = original_line + 1; l <= n; ++l)
            if (fragile_pos[static_cast<std::size_t>(l)] > 0)
                return fragile_pos[static_cast<std::size_t>(l)];
        return fragile_n + 1;
    };

    for (const auto& pb : recorded) {
        for (const auto& c : pb.chunks) {
            RestoreInsertion ins;
            ins.original_start = c.first;
            ins.before = first_kept_after(c.last);
            for (int l = c.first; l <= c.last; ++l)
                ins.lines.push_back(lines[static_cast<std::size_t>(l - 1)]);
            gt.insertions.push_back(std::move(ins));
        }

        GtBlock gb;
        int body_start = 0, body_end = 0;
        for (int l = pb.tb.try_span.start; l <= pb.tb.try_span.end; ++l) {
            int p = l >= 1 && l <= n ? fragile_pos[static_cast<std::size_t>(l)] : 0;
            if (p == 0) continue;
            if (body_start == 0) body_start = p;
            body_end = p;
            gt.sensitive_lines.insert(p);
        }
        gb.try_span = body_start > 0 ? code::LineSpan{body_start, body_end}
                                     : code::LineSpan{1, 0};
        for (const auto& cc : pb.tb.catch_clauses) gb.types.push_back(cc.exception);
        std::vector<std::string> stmt(lines.begin() + pb.tb.try_line - 1,
                                      lines.begin() + pb.tb.close_line);
        gb.handler_text = text::join_lines(stmt);
        gt.blocks.push_back(std::move(gb));
    }
    return gt;
}

std::string restore(const GroundTruth& gt) {
    auto fragile = text::split_lines(gt.fragile_source);
    const int n = static_cast<int>(fragile.size());
    std::map<int, std::vector<const RestoreInsertion*>> by_pos;
    for (const auto& i : gt.insertions) {
        if (i.before < 1 || i.before > n + 1)
            throw validation_error("restore insertion outside the fragile text");
        by_pos[i.before].push_back(&i);
    }
    for (auto& [pos, group] : by_pos)
        std::sort(group.begin(), group.end(),
                  [](const RestoreInsertion* a, const RestoreInsertion* b) {
                      return a->original_start < b->original_start;
                  });
    std::vector<std::string> out;
    for (int p = 1; p <= n + 1; ++p) {
        auto it = by_pos.find(p);
        if (it != by_pos.end())
            for (const auto* ins : it->second)
                out.insert(out.end(), ins->lines.begin(), ins->lines.end());
        if (p <= n) out.push_back(fragile[static_cast<std::size_t>(p - 1)]);
    }
    return text::join_lines(out);
}

void save_ground_truth(const std::string& path, const GroundTruth& gt) {
    text::write_file(path, gt.to_json().dump(2) + "\n");
}

GroundTruth load_ground_truth(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw parse_error("malformed ground-truth file " + path + ": " + e.what());
    }
    return GroundTruth::from_json(doc);
}

// ----- Composite Quality Metric ------------------------------------------

namespace {

Tri tri_from_string(const std::string& s, const std::string& repo, const char* field) {
    auto v = text::to_lower(text::trim(s));
    if (v == "yes" || v == "y") return Tri::Yes;
    if (v == "no" || v == "n") return Tri::No;
    if (v == "unknown" || v == "n/a" || v == "na" || v.empty()) return Tri::Unknown;
    throw parse_error("repo " + repo + ": field " + field +
                      " must be yes/no/unknown, got '" + s + "'");
}

double tri_value(Tri t) {
    switch (t) {
    case Tri::Yes: return 1.0;
    case Tri::No: return 0.0;
    default: return 0.5;
    }
}

} // namespace

std::vector<RepoMeta> load_repos(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw parse_error("malformed repo metadata " + path + ": " + e.what());
    }
    if (!doc.contains("repos") || !doc["repos"].is_array())
        throw parse_error("repo metadata " + path + " lacks a \"repos\" array");
    std::vector<RepoMeta> out;
    for (const auto& r : doc["repos"]) {
        RepoMeta m;
        m.name = r.value("name", "");
        if (m.name.empty()) throw validation_error("repo entry without a name");
        m.commits = r.value("commits", 0L);
        m.stars = r.value("stars", 0L);
        m.forks = r.value("forks", 0L);
        if (m.commits < 0 || m.stars < 0 || m.forks < 0)
            throw validation_error("repo " + m.name + ": counts must be non-negative");
        if (r.contains("issue_fix") && r["issue_fix"].is_number()) {
            long v = r["issue_fix"].get<long>();
            if (v < 0)
                throw validation_error("repo " + m.name + ": counts must be non-negative");
            m.issue_fix = v;
        }
        m.doc = tri_from_string(r.value("doc", "unknown"), m.name, "doc");
        m.under_maintenance =
            tri_from_string(r.value("under_maintenance", "unknown"), m.name,
                            "under_maintenance");
        out.push_back(std::move(m));
    }
    return out;
}

const std::vector<std::string>& cqm_dimensions() {
    static const std::vector<std::string> dims = {
        "commits", "stars", "forks", "issue_fix", "doc", "under_maintenance"};
    return dims;
}

std::map<std::string, double> default_cqm_weights() {
    std::map<std::string, double> w;
    for (const auto& d : cqm_dimensions()) w[d] = 1.0;
    return w;
}

std::vector<CqmScore> cqm(const std::vector<RepoMeta>& repos,
                          const std::map<std::string, double>& weights) {
    if (repos.empty()) throw validation_error("cqm requires at least one repo");
    double total_weight = 0.0;
    for (const auto& [dim, w] : weights) {
        if (std::find(cqm_dimensions().begin(), cqm_dimensions().end(), dim) ==
            cqm_dimensions().end())
            throw config_error("unknown cqm dimension: " + dim);
        if (w < 0.0) throw config_error("cqm weight for " + dim + " must be >= 0");
        total_weight += w;
    }
    if (total_weight <= 0.0) throw config_error("cqm weights must not all be zero");

    auto weight = [&](const char* dim) {
        auto it = weights.find(dim);
        return it == weights.end() ? 0.0 : it->second;
    };

    // min-max over the known values of one numeric dimension
    auto normalized = [&](auto getter) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& r : repos) {
            auto v = getter(r);
            if (!v) continue;
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
        std::vector<double> out;
        for (const auto& r : repos) {
            auto v = getter(r);
            if (!v)
                out.push_back(0.5); // unknown
            else if (hi <= lo)
                out.push_back(1.0); // degenerate range, incl. the single-repo case
            else
                out.push_back((*v - lo) / (hi - lo));
        }
        return out;
    };

    auto commits_n = normalized([](const RepoMeta& r) {
        return std::optional<double>(static_cast<double>(r.commits));
    });
    auto stars_n = normalized([](const RepoMeta& r) {
        return std::optional<double>(static_cast<double>(r.stars));
    });
    auto forks_n = normalized([](const RepoMeta& r) {
        return std::optional<double>(static_cast<double>(r.forks));
    });
    auto issues_n = normalized([](const RepoMeta& r) {
        return r.issue_fix ? std::optional<double>(static_cast<double>(*r.issue_fix))
                           : std::nullopt;
    });

    std::vector<CqmScore> scores;
    for (std::size_t i = 0; i < repos.size(); ++i) {
        double s = weight("commits") * commits_n[i] + weight("stars") * stars_n[i] +
                   weight("forks") * forks_n[i] + weight("issue_fix") * issues_n[i] +
                   weight("doc") * tri_value(repos[i].doc) +
                   weight("under_maintenance") * tri_value(repos[i].under_maintenance);
        scores.push_back({repos[i].name, s / total_weight});
    }
    std::sort(scores.begin(), scores.end(), [](const CqmScore& a, const CqmScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.name < b.name;
    });
    return scores;
}

// ----- Corpus manifest ----------------------------------------------------

nlohmann::json CorpusManifest::to_json() const {
    json doc;
    auto& arr = doc["snippets"] = json::array();
    for (const auto& e : entries) {
        json row;
        row["id"] = e.id;
        row["file"] = e.file;
        row["hash"] = e.hash;
        if (!e.truth_file.empty()) {
            row["truth_file"] = e.truth_file;
            row["truth_hash"] = e.truth_hash;
        }
        arr.push_back(std::move(row));
    }
    doc["diagnostics"] = diagnostics;
    return doc;
}

std::string CorpusManifest::serialize() const { return to_json().dump(2) + "\n"; }

CorpusManifest CorpusManifest::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw parse_error("malformed manifest " + path + ": " + e.what());
    }
    CorpusManifest m;
    if (!doc.contains("snippets") || !doc["snippets"].is_array())
        throw parse_error("manifest " + path + " lacks a \"snippets\" array");
    for (const auto& row : doc["snippets"]) {
        ManifestEntry e;
        e.id = row.value("id", "");
        e.file = row.value("file", "");
        e.hash = row.value("hash", "");
        e.truth_file = row.value("truth_file", "");
        e.truth_hash = row.value("truth_hash", "");
        if (e.id.empty() || e.file.empty() || e.hash.empty())
            throw validation_error("manifest " + path + " has an incomplete entry");
        m.entries.push_back(std::move(e));
    }
    if (doc.contains("diagnostics"))
        m.diagnostics = doc["diagnostics"].get<std::vector<std::string>>();
    return m;
}

CorpusManifest build_manifest(const std::string& dir) {
    if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir);
    CorpusManifest m;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        ManifestEntry e;
        e.id = p.stem().string();
        e.file = p.filename().string();
        try {
            e.hash = text::fnv1a64_hex(text::read_file(p.string()));
        } catch (const Error& err) {
            m.diagnostics.push_back(std::string("skipped ") + e.file + ": " + err.what());
            continue;
        }
        fs::path truth = p.parent_path() / (p.stem().string() + ".truth.json");
        if (fs::is_regular_file(truth)) {
            e.truth_file = truth.filename().string();
            e.truth_hash = text::fnv1a64_hex(text::read_file(truth.string()));
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

} // namespace seeker::corpus
