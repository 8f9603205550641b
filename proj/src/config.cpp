#include "seeker/config.hpp"

#include "seeker/deep_rag.hpp"
#include "seeker/errors.hpp"
#include "seeker/text_util.hpp"

#include <cstdlib>
#include <filesystem>

#include <nlohmann/json.hpp>

namespace seeker::cfg {

namespace fs = std::filesystem;

namespace {

std::string sibling(const std::string& cee_path, const std::string& name) {
    return (fs::path(cee_path).parent_path() / name).string();
}

void expect_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number())
        throw config_error("config key '" + key + "' must be a number");
}

void expect_string(const nlohmann::json& v, const std::string& key) {
    if (!v.is_string())
        throw config_error("config key '" + key + "' must be a string");
}

} // namespace

std::string RunConfig::effective_known_throws() const {
    return known_throws_path.empty() ? sibling(cee_path, "known_throws.json")
                                     : known_throws_path;
}

std::string RunConfig::effective_mock_rules() const {
    return mock_rules_path.empty() ? sibling(cee_path, "mock_rules.json") : mock_rules_path;
}

std::string RunConfig::effective_labels() const {
    if (!labels_path.empty()) return labels_path;
    auto sidecar = rag::labels_sidecar_path(cee_path);
    return fs::exists(sidecar) ? sidecar : std::string{};
}

void RunConfig::validate() const {
    if (alpha < 0 || beta < 0) throw config_error("alpha and beta must be non-negative");
    if (alpha + beta <= 0) throw config_error("alpha + beta must be positive");
    for (auto [name, v] : {std::pair<const char*, double>{"gamma", gamma},
                           {"delta", delta},
                           {"theta", theta}})
        if (v < 0.0 || v > 1.0)
            throw config_error(std::string(name) + " must be in [0, 1]");
    if (depth_limit < 0) throw config_error("depth must be >= 0");
    if (max_unit_lines < 1) throw config_error("max_unit_lines must be >= 1");
    if (concurrency < 1) throw config_error("concurrency must be >= 1");
    if (cee_path.empty()) throw config_error("cee path must not be empty");
    if (!mock && endpoint.empty())
        throw config_error("live mode requires an endpoint (--endpoint or SEEKER_ENDPOINT)");
}

nlohmann::json RunConfig::to_json() const {
    return {{"cee", cee_path},
            {"labels", labels_path},
            {"known_throws", known_throws_path},
            {"mock_rules", mock_rules_path},
            {"out", out_dir},
            {"alpha", alpha},
            {"beta", beta},
            {"gamma", gamma},
            {"delta", delta},
            {"theta", theta},
            {"depth", depth_limit},
            {"max_unit_lines", max_unit_lines},
            {"concurrency", concurrency},
            {"mock", mock},
            {"endpoint", endpoint},
            {"model", model},
            {"api_key_set", !api_key.empty()}};
}

void apply_overrides(RunConfig& config, const nlohmann::json& overrides) {
    if (overrides.is_null()) return;
    if (!overrides.is_object()) throw config_error("config overlay must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        if (key == "cee") { expect_string(value, key); config.cee_path = value; }
        else if (key == "labels") { expect_string(value, key); config.labels_path = value; }
        else if (key == "known_throws") { expect_string(value, key); config.known_throws_path = value; }
        else if (key == "mock_rules") { expect_string(value, key); config.mock_rules_path = value; }
        else if (key == "out") { expect_string(value, key); config.out_dir = value; }
        else if (key == "alpha") { expect_number(value, key); config.alpha = value; }
        else if (key == "beta") { expect_number(value, key); config.beta = value; }
        else if (key == "gamma") { expect_number(value, key); config.gamma = value; }
        else if (key == "delta") { expect_number(value, key); config.delta = value; }
        else if (key == "theta") { expect_number(value, key); config.theta = value; }
        else if (key == "depth") { expect_number(value, key); config.depth_limit = value; }
        else if (key == "max_unit_lines") { expect_number(value, key); config.max_unit_lines = value; }
        else if (key == "concurrency") { expect_number(value, key); config.concurrency = value; }
        else if (key == "mock") {
            if (!value.is_boolean()) throw config_error("config key 'mock' must be a boolean");
            config.mock = value;
        }
        else if (key == "endpoint") { expect_string(value, key); config.endpoint = value; }
        else if (key == "model") { expect_string(value, key); config.model = value; }
        else if (key == "api_key") { expect_string(value, key); config.api_key = value; }
        else throw config_error("unknown config key '" + key + "'");
    }
}

RunConfig resolve(const std::optional<std::string>& config_file,
                  const std::map<std::string, std::string>& env,
                  const nlohmann::json& flag_overrides) {
    RunConfig config;
    bool mock_explicit = false;
    bool endpoint_given = false;

    auto overlay = [&](const nlohmann::json& doc) {
        apply_overrides(config, doc);
        if (doc.is_object()) {
            if (doc.contains("mock")) mock_explicit = true;
            if (doc.contains("endpoint") && !doc.at("endpoint").get<std::string>().empty())
                endpoint_given = true;
        }
    };

    if (config_file) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text::read_file(*config_file));
        } catch (const nlohmann::json::exception& e) {
            throw config_error("config file " + *config_file + ": " + e.what());
        }
        overlay(doc);
    }

    nlohmann::json env_overlay = nlohmann::json::object();
    if (auto it = env.find("SEEKER_API_KEY"); it != env.end() && !it->second.empty())
        env_overlay["api_key"] = it->second;
    if (auto it = env.find("SEEKER_ENDPOINT"); it != env.end() && !it->second.empty())
        env_overlay["endpoint"] = it->second;
    overlay(env_overlay);

    overlay(flag_overrides);

    // an endpoint without an explicit mock choice means a live run was asked for
    if (endpoint_given && !mock_explicit) config.mock = false;

    config.validate();
    return config;
}

RunConfig resolve_from_process_env(const std::optional<std::string>& config_file,
                                   const nlohmann::json& flag_overrides) {
    std::map<std::string, std::string> env;
    for (const char* name : {"SEEKER_API_KEY", "SEEKER_ENDPOINT"})
        if (const char* v = std::getenv(name)) env[name] = v;
    return resolve(config_file, env, flag_overrides);
}

} // namespace seeker::cfg
