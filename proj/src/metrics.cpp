#include "seeker/metrics.hpp"

#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seeker::metrics {

namespace {

// Greedy one-to-one exact-span pairing: for each predicted block, the first
// unconsumed actual block with an identical span.
std::vector<int> pair_blocks(const std::vector<EvalBlock>& predicted,
                             const std::vector<EvalBlock>& actual) {
    std::vector<int> match(predicted.size(), -1);
    std::vector<bool> used(actual.size(), false);
    for (std::size_t p = 0; p < predicted.size(); ++p)
        for (std::size_t a = 0; a < actual.size(); ++a)
            if (!used[a] && predicted[p].try_span == actual[a].try_span) {
                match[p] = static_cast<int>(a);
                used[a] = true;
                break;
            }
    return match;
}

} // namespace

double cov(const std::set<int>& detected, const std::set<int>& actual) {
    if (actual.empty()) return 1.0;
    std::size_t hit = 0;
    for (int l : actual)
        if (detected.count(l)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(actual.size());
}

double cov_p(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual) {
    if (predicted.empty() && actual.empty()) return 1.0;
    auto match = pair_blocks(predicted, actual);
    std::size_t correct = 0, spurious = 0;
    for (int m : match)
        (m >= 0 ? correct : spurious) += 1;
    return static_cast<double>(correct) /
           static_cast<double>(actual.size() + spurious);
}

double acc(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual,
           const cee::ExceptionTree& tree) {
    auto match = pair_blocks(predicted, actual);
    std::size_t total = 0, correct = 0;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (const auto& type : predicted[p].types) {
            ++total;
            if (match[p] < 0) continue;
            for (const auto& want : actual[static_cast<std::size_t>(match[p])].types) {
                bool ok = type == want;
                if (!ok && tree.contains(type) && tree.contains(want))
                    ok = tree.is_subtype(type, want);
                if (ok) {
                    ++correct;
                    break;
                }
            }
        }
    }
    if (total == 0) {
        std::size_t actual_types = 0;
        for (const auto& b : actual) actual_types += b.types.size();
        return actual_types == 0 ? 1.0 : 0.0;
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

double edit_similarity(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a == b) return 1.0;
    const std::size_t n = a.size(), m = b.size();
    // two-row DP keeps memory linear even for ~100k-char inputs
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    double lev = static_cast<double>(prev[m]);
    return 1.0 - lev / static_cast<double>(std::max(n, m));
}

double es(const std::vector<EvalBlock>& predicted, const std::vector<EvalBlock>& actual) {
    if (actual.empty()) return 1.0;
    auto match = pair_blocks(predicted, actual);
    std::vector<double> per_actual(actual.size(), 0.0);
    for (std::size_t p = 0; p < predicted.size(); ++p)
        if (match[p] >= 0)
            per_actual[static_cast<std::size_t>(match[p])] = edit_similarity(
                text::normalize_whitespace(predicted[p].handler_text),
                text::normalize_whitespace(actual[static_cast<std::size_t>(match[p])]
                                               .handler_text));
    double sum = 0;
    for (double v : per_actual) sum += v;
    return sum / static_cast<double>(actual.size());
}

double crs(const std::vector<bool>& judgments) {
    if (judgments.empty()) throw validation_error("crs over an empty judgment list");
    std::size_t good = 0;
    for (bool j : judgments)
        if (j) ++good;
    return static_cast<double>(good) / static_cast<double>(judgments.size());
}

namespace {

bool parses(const std::string& code) {
    auto pr = code::parse_source(code);
    return !pr.degraded;
}

bool has_specific_catch(const std::string& code) {
    auto pr = code::parse_source(code);
    for (const auto& tb : pr.try_blocks)
        for (const auto& cc : tb.catch_clauses)
            if (cc.exception != "Exception" && cc.exception != "Throwable" &&
                cc.exception != "Error")
                return true;
    return false;
}

bool has_nonempty_handler(const std::string& code) {
    auto pr = code::parse_source(code);
    auto lines = text::split_lines(code);
    for (const auto& tb : pr.try_blocks)
        for (const auto& cc : tb.catch_clauses)
            for (int l = cc.handler_span.start; l <= cc.handler_span.end; ++l)
                if (l >= 1 && l <= static_cast<int>(lines.size()) &&
                    !text::trim(lines[static_cast<std::size_t>(l - 1)]).empty())
                    return true;
    return false;
}

} // namespace

double MockReview::score(const std::string& code) {
    if (!parses(code)) return 0.0;
    double s = 0.4;
    if (has_specific_catch(code)) s += 0.3;
    if (has_nonempty_handler(code)) s += 0.3;
    return s;
}

bool MockReview::judge(const std::string& code) {
    return parses(code) && has_specific_catch(code) && has_nonempty_handler(code);
}

std::optional<double> acrs(const std::string& generated_code, ReviewOracle& oracle) {
    try {
        return std::clamp(oracle.score(generated_code), 0.0, 1.0);
    } catch (...) {
        return std::nullopt; // unavailable, not zero
    }
}

nlohmann::json MetricsReport::to_json() const {
    nlohmann::json doc;
    if (acrs) doc["acrs"] = *acrs;
    else doc["acrs"] = nullptr;
    doc["cov"] = cov;
    doc["cov_p"] = cov_p;
    doc["acc"] = acc;
    doc["es"] = es;
    doc["crs"] = crs;
    doc["empty_input"] = empty_input;
    auto& per = doc["per_snippet"] = nlohmann::json::array();
    for (const auto& s : per_snippet) {
        nlohmann::json row;
        row["snippet_id"] = s.snippet_id;
        row["cov"] = s.cov;
        row["cov_p"] = s.cov_p;
        row["acc"] = s.acc;
        row["es"] = s.es;
        row["good"] = s.judged_good;
        if (s.acrs) row["acrs"] = *s.acrs;
        per.push_back(row);
    }
    return doc;
}

std::string MetricsReport::table_text() const {
    std::ostringstream os;
    os << std::left << std::setw(8) << "ACRS" << std::setw(8) << "COV" << std::setw(8)
       << "COV-P" << std::setw(8) << "ACC" << std::setw(8) << "ES" << std::setw(8)
       << "CRS" << "\n";
    os << std::fixed << std::setprecision(3);
    if (acrs) os << std::setw(8) << *acrs;
    else os << std::setw(8) << "n/a";
    os << std::setw(8) << cov << std::setw(8) << cov_p << std::setw(8) << acc
       << std::setw(8) << es << std::setw(8) << crs << "\n";
    return os.str();
}

MetricsReport compute_report(const std::vector<EvalRecord>& records,
                             const cee::ExceptionTree& tree, ReviewOracle& oracle) {
    MetricsReport report;
    if (records.empty()) {
        // defined-by-convention values for an empty corpus
        report.empty_input = true;
        report.cov = report.cov_p = report.acc = report.es = 1.0;
        report.crs = 1.0;
        report.acrs = std::nullopt;
        return report;
    }
    std::vector<bool> judgments;
    double sum_cov = 0, sum_cov_p = 0, sum_acc = 0, sum_es = 0, sum_acrs = 0;
    int acrs_n = 0;
    for (const auto& r : records) {
        SnippetMetrics s;
        s.snippet_id = r.snippet_id;
        s.cov = cov(r.detected_sensitive_lines, r.actual_sensitive_lines);
        s.cov_p = cov_p(r.predicted_blocks, r.actual_blocks);
        s.acc = acc(r.predicted_blocks, r.actual_blocks, tree);
        s.es = es(r.predicted_blocks, r.actual_blocks);
        try {
            s.judged_good = oracle.judge(r.generated_code);
        } catch (...) {
            s.judged_good = false;
        }
        s.acrs = acrs(r.generated_code, oracle);
        judgments.push_back(s.judged_good);
        sum_cov += s.cov;
        sum_cov_p += s.cov_p;
        sum_acc += s.acc;
        sum_es += s.es;
        if (s.acrs) {
            sum_acrs += *s.acrs;
            ++acrs_n;
        }
        report.per_snippet.push_back(std::move(s));
    }
    double n = static_cast<double>(records.size());
    report.cov = sum_cov / n;
    report.cov_p = sum_cov_p / n;
    report.acc = sum_acc / n;
    report.es = sum_es / n;
    report.crs = crs(judgments);
    if (acrs_n > 0) report.acrs = sum_acrs / acrs_n;
    return report;
}

} // namespace seeker::metrics
