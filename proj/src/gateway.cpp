#include "seeker/gateway.hpp"

#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

#include <httplib.h>

using nlohmann::json;

namespace seeker::gateway {

namespace {

// Placeholders each template actually binds; braces elsewhere in the bodies
// (JSON examples, output sketches) are literal text.
struct TemplateDef {
    PromptTemplate tpl;
    std::vector<std::string> placeholders;
    std::vector<std::string> schema_fields; // empty = free-text response
};

const std::vector<TemplateDef>& template_defs() {
    static const std::vector<TemplateDef> defs = {
        {{"genscenario", R"(Below is a kind of exception in java. Please according to the sample
discription of scenario of errortype, provide a scenario description of the
exception in java just like the sample description.Please note that the
granularity of the scenario descriptions you generate should be consistent
with the examples.

[Sample Description]
{sample_desc}

[Exception]
{ename}

Note you should output in the json format like below, please note that the
granularity of the scenario descriptions you generate should be consistent
with the examples.:
{{
    "scenario": ...
}}
)"},
         {"sample_desc", "ename"},
         {"scenario"}},
        {{"genproperty", R"(Below is a kind of exception in java and its scenario description. Please
according to the sample discription of scenario and property of errortype,
provide a property description of the exception in java just like the sample
description. You can alse adjust the given scenario description to make them
consistent. Please note that the granularity of the property descriptions you
generate should be consistent with the examples.

[Sample Description]
{sample_desc}

[Exception]
{ename}

[Scenario Description]
{scenario}

Note you should output in the json format like below, please note that the
granularity of the property descriptions you generate should be consistent
with the examples.:
{{
    "scenario": ...;
    "property": ...
}}
)"},
         {"sample_desc", "ename", "scenario"},
         {"scenario", "property"}},
        {{"planner", R"(You are a software engineer tasked with analyzing a codebase. Your task is
to segment the given codebase into manageable units for further analysis. The
criteria for segmentation are:

- Each unit should have a length within 200 lines.
- The function nesting level should be low.
- The logical flow should be clear and self-contained.
- The segment should be complete and readable.

Given the following codebase:

[Codebase]
{codebase}

Please segment the codebase into units and list them as:

Unit 1:
[Code Segment]
{unit1}

Unit 2:
[Code Segment]
{unit2}

...

Ensure that each unit complies with the criteria specified above.

)"},
         {"codebase"},
         {}},
        {{"detector_scenario", R"(You are a java code auditor. You will be given a doc describe
different exception scenarios and a java code snippet.

Your task is to label each line of the code snippet with the exception
scenario that it belongs to. If a line does not belong to any scenario,
label it with "None". If a line belongs to one of the given scenarios,
label it with all the scenarios it belongs to.

[Scenario description]
{scenario}

[Java code]
{code}

Please output the labeling result in the json format like below:
{{
    "code_with_label": ...
}}
)"},
         {"scenario", "code"},
         {"code_with_label"}},
        {{"detector_property", R"(You are a java code auditor. You will be given a doc describe
different exception properties and a java code snippet.

Your task is to label each line of the code snippet with the exception
property that it belongs to. If a line does not belong to any property,
label it with "None". If a line belongs to one of the given properties,
label it with all the properties it belongs to.

[property description]
{property}

[Java code]
{code}

Please output the labeling result in the json format like below:
{{
    "code_with_label": ...
}}
)"},
         {"property", "code"},
         {"code_with_label"}},
        {{"predator", R"(You are a code analysis assistant. Your task is to process the given
code unit and identify specific exception types that may be thrown.

[Code Unit]
{code_unit}

[Code Summary]
{code_summary}

Based on the code summary and the potential exception branches provided,
identify the specific exception nodes that may be thrown.

[Potential Exception Branches]
{exception_branches}

Please answer in the following JSON format:

{
    "ExceptionNodes": [
        {
            "ExceptionType": "ExceptionType1",
        },
        {
            "ExceptionType": "ExceptionType2",
        },
        ...
    ]
}

Ensure that your response strictly follows the specified format.

)"},
         {"code_unit", "code_summary", "exception_branches"},
         {"ExceptionNodes"}},
        {{"ranker", R"(You are an exception ranking assistant. Your task is to assign grades
to the identified exceptions based on their likelihood and the suitability
of their handling strategies.

For each exception, please calculate:

- Exception Likelihood Score (from 0 to 1) based on its attributes and
impact.
- Suitability Score (from 0 to 1) of the proposed handling strategy.

[Identified Exceptions and Handling Strategies]
{
    "ExceptionNodes": [
        {
            "ExceptionType": "ExceptionType1",
            "HandlingStrategy": "{strategy1}",
            "CEE_Info": "{info1}"
        },
        ...
    ]
}

Provide your calculations and the final grades in the following JSON format:

{
    "Exceptions": [
        {
            "ExceptionType": "ExceptionType1",
            "LikelihoodScore": value,
            "SuitabilityScore": value,
        },
        ...
    ]
}

Please ensure your response adheres to the specified format.

)"},
         {"strategy1", "info1"},
         {"Exceptions"}},
        {{"handler", R"(You are a software engineer specializing in exception handling. Your
task is to optimize the given code unit by applying appropriate exception
handling strategies.

[Code Unit]
{code_unit}

[Handling Strategy]
{strategy1}

Generate the optimized code with the applied exception handling strategies.

Please provide the optimized code in the following format:

[Optimized Code]
{optimized_code}

Ensure that the code is syntactically correct and adheres to best practices
in exception handling.

)"},
         {"code_unit", "strategy1"},
         {}},
    };
    return defs;
}

const TemplateDef& find_def(const std::string& name) {
    for (const auto& d : template_defs())
        if (d.tpl.name == name) return d;
    throw lookup_error("unknown prompt template: " + name);
}

bool is_ident(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

// Extracts the block between `begin` (exclusive, to end of its line) and the
// next occurrence of `end`; to end of text when `end` is absent or empty.
std::string section(const std::string& text, const std::string& begin,
                    const std::string& end) {
    auto b = text.find(begin);
    if (b == std::string::npos) return "";
    b = text.find('\n', b + begin.size());
    if (b == std::string::npos) return "";
    b += 1;
    auto e = end.empty() ? std::string::npos : text.find(end, b);
    if (e == std::string::npos) return text.substr(b);
    return text.substr(b, e - b);
}

std::vector<std::string> content_words(const std::string& text, int min_len) {
    std::vector<std::string> out;
    for (const auto& w : text::words(text))
        if (static_cast<int>(w.size()) >= min_len) out.push_back(w);
    return out;
}

// Splits CamelCase into lowercased words: "IOException" -> {"io",
// "exception"}.
std::vector<std::string> camel_words(const std::string& name) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < name.size(); ++i) {
        unsigned char c = name[i];
        bool boundary = std::isupper(c) && !cur.empty() &&
                        (!std::isupper(static_cast<unsigned char>(name[i - 1])) ||
                         (i + 1 < name.size() &&
                          std::islower(static_cast<unsigned char>(name[i + 1]))));
        if (boundary) {
            out.push_back(text::to_lower(cur));
            cur.clear();
        }
        if (std::isalnum(c)) cur.push_back(static_cast<char>(c));
    }
    if (!cur.empty()) out.push_back(text::to_lower(cur));
    return out;
}

// "- Key: text" entries of a doc block.
std::vector<std::pair<std::string, std::string>> doc_entries(const std::string& block) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& line : text::split_lines(block)) {
        auto t = text::trim(line);
        if (t.rfind("- ", 0) != 0) continue;
        auto colon = t.find(':');
        if (colon == std::string::npos) continue;
        out.emplace_back(text::trim(t.substr(2, colon - 2)), text::trim(t.substr(colon + 1)));
    }
    return out;
}

bool any_word_in_line(const std::vector<std::string>& ws, const std::string& lower_line) {
    return std::any_of(ws.begin(), ws.end(), [&](const std::string& w) {
        return lower_line.find(w) != std::string::npos;
    });
}

} // namespace

const std::vector<PromptTemplate>& templates() {
    static const std::vector<PromptTemplate> tpls = [] {
        std::vector<PromptTemplate> out;
        for (const auto& d : template_defs()) out.push_back(d.tpl);
        return out;
    }();
    return tpls;
}

const PromptTemplate& find_template(const std::string& name) { return find_def(name).tpl; }

std::string render(const PromptTemplate& tpl, const Bindings& bindings) {
    // Unknown names are ad-hoc templates with no declared placeholders.
    std::set<std::string> declared;
    for (const auto& d : template_defs())
        if (d.tpl.name == tpl.name)
            declared.insert(d.placeholders.begin(), d.placeholders.end());
    for (const auto& p : declared)
        if (!bindings.count(p))
            throw config_error("render '" + tpl.name + "': missing binding for placeholder '" +
                               p + "'");

    std::string out;
    out.reserve(tpl.body.size());
    const std::string& b = tpl.body;
    for (std::size_t i = 0; i < b.size();) {
        if (b[i] == '{' && i + 1 < b.size() && b[i + 1] == '{') {
            out.push_back('{');
            i += 2;
        } else if (b[i] == '}' && i + 1 < b.size() && b[i + 1] == '}') {
            out.push_back('}');
            i += 2;
        } else if (b[i] == '{') {
            auto close = b.find('}', i + 1);
            std::string name =
                close == std::string::npos ? "" : b.substr(i + 1, close - i - 1);
            if (is_ident(name) && declared.count(name)) {
                out += bindings.at(name);
                i = close + 1;
            } else {
                out.push_back(b[i]);
                i += 1;
            }
        } else {
            out.push_back(b[i]);
            i += 1;
        }
    }
    return out;
}

MockRules MockRules::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::parse_error& e) {
        throw parse_error("mock rules " + path + ": " + e.what());
    }
    MockRules r;
    r.min_scenario_word_len = doc.value("min_scenario_word_len", 4);
    r.suitability_score = doc.value("suitability_score", 0.8);
    r.keyword_likelihood = doc.value("keyword_likelihood", 0.9);
    if (doc.contains("type_keywords"))
        for (const auto& [k, v] : doc.at("type_keywords").items())
            r.type_keywords[text::to_lower(k)] = v.get<std::string>();
    return r;
}

std::string MockTransport::send(const std::string& prompt) {
    if (prompt.find("provide a scenario description") != std::string::npos) {
        std::string ename = text::trim(section(prompt, "[Exception]", "\n\n"));
        auto ws = camel_words(ename);
        std::string phrase;
        for (const auto& w : ws) {
            if (!phrase.empty()) phrase += ' ';
            phrase += w;
        }
        json out;
        out["scenario"] = "attempt to perform an operation that may raise " + phrase;
        return out.dump();
    }
    if (prompt.find("provide a property description") != std::string::npos) {
        std::string ename = text::trim(section(prompt, "[Exception]", "\n\n"));
        std::string scen = text::trim(section(prompt, "[Scenario Description]", "\n\n"));
        json out;
        out["scenario"] = scen;
        out["property"] = "the operation may fail with " + ename +
                          " when its preconditions are violated";
        return out.dump();
    }
    if (prompt.find("segment the given codebase") != std::string::npos) {
        return "[Code Segment]\n" + section(prompt, "[Codebase]", "\nPlease segment");
    }
    if (prompt.find("label each line of the code snippet") != std::string::npos) {
        bool by_scenario = prompt.find("[Scenario description]") != std::string::npos;
        std::string doc = by_scenario
                              ? section(prompt, "[Scenario description]", "[Java code]")
                              : section(prompt, "[property description]", "[Java code]");
        std::string code = section(prompt, "[Java code]", "\nPlease output");
        auto entries = doc_entries(doc);
        std::vector<std::pair<std::string, std::vector<std::string>>> keyed;
        for (const auto& [key, txt] : entries)
            keyed.emplace_back(key, content_words(txt, rules_.min_scenario_word_len));

        json labels = json::array();
        auto lines = text::split_lines(code);
        while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
        for (std::size_t i = 0; i < lines.size(); ++i) {
            std::string lower = text::to_lower(lines[i]);
            json ls = json::array();
            for (const auto& [key, ws] : keyed)
                if (any_word_in_line(ws, lower)) ls.push_back(key);
            if (ls.empty()) ls.push_back("None");
            labels.push_back({{"line", i + 1}, {"labels", ls}});
        }
        json out;
        out["code_with_label"] = labels;
        return out.dump();
    }
    if (prompt.find("identify the specific exception nodes") != std::string::npos) {
        std::string unit = section(prompt, "[Code Unit]", "\n\n[Code Summary]");
        std::string branches =
            section(prompt, "[Potential Exception Branches]", "\nPlease answer");
        std::string lower = text::to_lower(unit);
        std::set<std::string> types;
        for (const auto& [key, txt] : doc_entries(branches))
            if (any_word_in_line(content_words(txt, rules_.min_scenario_word_len), lower))
                types.insert(key);
        for (const auto& [kw, type] : rules_.type_keywords)
            if (lower.find(kw) != std::string::npos) types.insert(type);
        json nodes = json::array();
        for (const auto& t : types) nodes.push_back({{"ExceptionType", t}});
        json out;
        out["ExceptionNodes"] = nodes;
        return out.dump();
    }
    if (prompt.find("exception ranking assistant") != std::string::npos) {
        json exes = json::array();
        const std::string marker = "\"CEE_Info\": \"";
        for (std::size_t pos = prompt.find(marker); pos != std::string::npos;
             pos = prompt.find(marker, pos + 1)) {
            auto start = pos + marker.size();
            auto end = prompt.find('"', start);
            if (end == std::string::npos) break;
            std::string info = prompt.substr(start, end - start);
            // info layout: Type=<t> ;; Scenario=<s> ;; Segment=<g>
            auto field = [&](const std::string& key) -> std::string {
                auto k = info.find(key + "=");
                if (k == std::string::npos) return "";
                auto v = k + key.size() + 1;
                auto stop = info.find(" ;; ", v);
                return info.substr(v, stop == std::string::npos ? std::string::npos
                                                                : stop - v);
            };
            std::string type = field("Type");
            std::string scen = field("Scenario");
            std::string seg = text::to_lower(field("Segment"));
            auto ws = content_words(scen, rules_.min_scenario_word_len);
            double hit = 0;
            for (const auto& w : ws)
                if (seg.find(w) != std::string::npos) hit += 1;
            double likelihood = ws.empty() ? 0.0 : hit / static_cast<double>(ws.size());
            for (const auto& [kw, t] : rules_.type_keywords)
                if (t == type && seg.find(kw) != std::string::npos)
                    likelihood = std::max(likelihood, rules_.keyword_likelihood);
            exes.push_back({{"ExceptionType", type},
                            {"LikelihoodScore", likelihood},
                            {"SuitabilityScore", rules_.suitability_score}});
        }
        json out;
        out["Exceptions"] = exes;
        return out.dump();
    }
    if (prompt.find("[Handling Strategy]") != std::string::npos) {
        return "[Optimized Code]\n" + section(prompt, "[Code Unit]", "\n\n[Handling Strategy]");
    }
    throw gateway_error("mock transport: unrecognized prompt");
}

HttpTransport::HttpTransport(std::string endpoint, std::string model, std::string api_key,
                             int timeout_seconds)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {}

std::string HttpTransport::send(const std::string& prompt) {
    auto scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos)
        throw config_error("endpoint must include a scheme: " + endpoint_);
    auto path_start = endpoint_.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? endpoint_
                                                       : endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/"
                                                       : endpoint_.substr(path_start);

    httplib::Client client(base);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_connection_timeout(timeout_seconds_, 0);

    json body;
    body["model"] = model_;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = 0;

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw gateway_error("transport failure contacting " + endpoint_ + ": " +
                            httplib::to_string(res.error()));
    if (res->status != 200)
        throw gateway_error("endpoint returned status " + std::to_string(res->status));
    try {
        auto doc = json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed completion response: ") + e.what());
    }
}

std::string cache_key(const std::string& template_name, const Bindings& bindings,
                      const std::string& model_id) {
    std::string blob = template_name;
    blob.push_back('\x1f');
    for (const auto& [k, v] : bindings) {
        blob += k;
        blob.push_back('\x1e');
        blob += v;
        blob.push_back('\x1f');
    }
    blob += model_id;
    return text::fnv1a64_hex(blob);
}

Gateway::Gateway(std::shared_ptr<Transport> transport, GatewayOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
    if (options_.concurrency_limit < 1) options_.concurrency_limit = 1;
}

bool Gateway::cache_lookup(const std::string& key, std::string& out) {
    std::lock_guard lock(cache_mutex_);
    auto it = memory_cache_.find(key);
    if (it != memory_cache_.end()) {
        out = it->second;
        return true;
    }
    if (options_.cache_dir.empty()) return false;
    auto path = std::filesystem::path(options_.cache_dir) / (key + ".json");
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return false;
    try {
        auto doc = json::parse(text::read_file(path.string()));
        out = doc.at("response").get<std::string>();
        memory_cache_[key] = out;
        return true;
    } catch (...) {
        return false; // corrupt entry is a miss
    }
}

void Gateway::cache_store(const std::string& key, const std::string& response) {
    std::lock_guard lock(cache_mutex_);
    memory_cache_[key] = response;
    if (options_.cache_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(options_.cache_dir, ec);
    json doc;
    doc["response"] = response;
    text::write_file((std::filesystem::path(options_.cache_dir) / (key + ".json")).string(),
                     doc.dump());
}

std::string Gateway::guarded_send(const std::string& prompt) {
    {
        std::unique_lock lock(flight_mutex_);
        flight_cv_.wait(lock, [&] { return in_flight_ < options_.concurrency_limit; });
        ++in_flight_;
    }
    transport_calls_.fetch_add(1);
    try {
        std::string resp = transport_->send(prompt);
        {
            std::lock_guard lock(flight_mutex_);
            --in_flight_;
        }
        flight_cv_.notify_one();
        return resp;
    } catch (...) {
        {
            std::lock_guard lock(flight_mutex_);
            --in_flight_;
        }
        flight_cv_.notify_one();
        throw;
    }
}

Completion Gateway::complete(const std::string& template_name, const Bindings& bindings) {
    std::string prompt = render(find_template(template_name), bindings);
    return complete_prompt(template_name, prompt,
                           cache_key(template_name, bindings, options_.model_id));
}

Completion Gateway::complete_prompt(const std::string& template_name,
                                    const std::string& prompt, const std::string& key) {
    struct {
        std::vector<std::string> schema_fields;
    } def;
    for (const auto& d : template_defs())
        if (d.tpl.name == template_name) def.schema_fields = d.schema_fields;

    Completion c;
    c.request_id = key;
    c.prompt = prompt;

    std::string cached;
    if (options_.cache_enabled && cache_lookup(key, cached)) {
        c.response = cached;
        c.from_cache = true;
        if (!def.schema_fields.empty()) c.parsed = json::parse(cached, nullptr, false);
        if (c.parsed.is_discarded()) c.parsed = json(); // will surface as a re-ask below
        else return c;
    }

    std::string ask = prompt;
    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_retries + 1; ++attempt) {
        c.attempts = attempt;
        c.from_cache = false;
        c.response = guarded_send(ask);
        if (def.schema_fields.empty()) {
            if (options_.cache_enabled) cache_store(key, c.response);
            return c;
        }
        json parsed = json::parse(c.response, nullptr, false);
        bool ok = !parsed.is_discarded() && parsed.is_object();
        if (ok)
            for (const auto& f : def.schema_fields)
                if (!parsed.contains(f)) {
                    ok = false;
                    last_error = "missing field '" + f + "'";
                }
        if (parsed.is_discarded()) last_error = "response is not valid JSON";
        if (ok) {
            c.parsed = parsed;
            if (options_.cache_enabled) cache_store(key, c.response);
            return c;
        }
        std::string fields;
        for (const auto& f : def.schema_fields) {
            if (!fields.empty()) fields += ", ";
            fields += f;
        }
        ask = prompt + "\n\nReminder: respond with a single valid JSON object containing: " +
              fields + ".";
    }
    throw parse_error("gateway: response failed schema for '" + template_name + "' after " +
                      std::to_string(options_.max_retries + 1) + " attempts (" + last_error +
                      "); raw: " + c.response);
}

} // namespace seeker::gateway
