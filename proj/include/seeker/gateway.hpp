#pragma once

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace seeker::gateway {

// Prompt template with python-format style placeholders: {name} substitutes,
// {{ and }} escape literal braces.
struct PromptTemplate {
    std::string name;
    std::string body;
};

// The eight agent templates, by name: genscenario, genproperty, planner,
// detector_scenario, detector_property, predator, ranker, handler.
const std::vector<PromptTemplate>& templates();
const PromptTemplate& find_template(const std::string& name);

using Bindings = std::map<std::string, std::string>;

// Byte-exact substitution; throws a config error naming the first unbound
// placeholder.
std::string render(const PromptTemplate& tpl, const Bindings& bindings);

struct Completion {
    std::string request_id;
    std::string prompt;
    std::string response;
    nlohmann::json parsed; // null for free-text templates
    int attempts = 0;
    bool from_cache = false;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string send(const std::string& prompt) = 0;
};

// Deterministic ruleset for offline runs, shipped as a reviewable data file.
struct MockRules {
    int min_scenario_word_len = 4;
    double suitability_score = 0.8;
    double keyword_likelihood = 0.9;
    // lowercase keyword -> exception type name
    std::map<std::string, std::string> type_keywords;

    static MockRules load(const std::string& path);
};

// Pure function of the prompt text: the same prompt always yields the same
// response, across processes.
class MockTransport : public Transport {
public:
    explicit MockTransport(MockRules rules) : rules_(std::move(rules)) {}
    std::string send(const std::string& prompt) override;
    const MockRules& rules() const { return rules_; }

private:
    MockRules rules_;
};

// Chat-completion HTTP client. Request body: {"model": ..., "messages":
// [{"role": "user", "content": prompt}], "temperature": 0}; response text read
// from choices[0].message.content.
class HttpTransport : public Transport {
public:
    HttpTransport(std::string endpoint, std::string model, std::string api_key,
                  int timeout_seconds = 60);
    std::string send(const std::string& prompt) override;

private:
    std::string endpoint_;
    std::string model_;
    std::string api_key_;
    int timeout_seconds_;
};

struct GatewayOptions {
    std::string model_id = "mock";
    int max_retries = 2;
    int concurrency_limit = 8;
    bool cache_enabled = true;
    std::string cache_dir; // empty = in-memory only
};

// Shareable across threads; enforces the in-flight limit internally.
class Gateway {
public:
    Gateway(std::shared_ptr<Transport> transport, GatewayOptions options);

    // Renders the named template, sends it, and validates the response
    // against the template's response schema (re-asking with a format
    // reminder up to max_retries times).
    Completion complete(const std::string& template_name, const Bindings& bindings);

    // Raw prompt variant used by tests; schema looked up by template name,
    // empty name = free text.
    Completion complete_prompt(const std::string& template_name, const std::string& prompt,
                               const std::string& cache_key);

    long transport_calls() const { return transport_calls_.load(); }
    void reset_transport_calls() { transport_calls_ = 0; }

private:
    std::shared_ptr<Transport> transport_;
    GatewayOptions options_;
    std::atomic<long> transport_calls_{0};

    std::mutex cache_mutex_;
    std::map<std::string, std::string> memory_cache_;

    std::mutex flight_mutex_;
    std::condition_variable flight_cv_;
    int in_flight_ = 0;

    bool cache_lookup(const std::string& key, std::string& out);
    void cache_store(const std::string& key, const std::string& response);
    std::string guarded_send(const std::string& prompt);
};

// Content-addressed digest of (template name, bindings, model id).
std::string cache_key(const std::string& template_name, const Bindings& bindings,
                      const std::string& model_id);

} // namespace seeker::gateway
