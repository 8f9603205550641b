#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace seeker::cfg {

// Effective run configuration. Built by resolve() from four layers, strongest
// last: defaults < config file < environment < flags.
struct RunConfig {
    std::string cee_path = "data/cee.json";
    std::string labels_path;       // empty = use the sidecar when present
    std::string known_throws_path; // empty = known_throws.json beside the CEE
    std::string mock_rules_path;   // empty = mock_rules.json beside the CEE
    std::string out_dir;           // empty = stdout only, no files written

    double alpha = 0.5; // likelihood weight
    double beta = 0.5;  // suitability weight
    double gamma = 0.5; // application threshold
    double delta = 0.3; // retrieval relevance threshold
    double theta = 0.5; // label verification threshold
    int depth_limit = 0;
    int max_unit_lines = 200;
    int concurrency = 8;

    bool mock = true; // offline deterministic transport
    std::string endpoint;
    std::string model = "mock";
    std::string api_key;

    // Paths for the sibling data files, derived when not set explicitly.
    std::string effective_known_throws() const;
    std::string effective_mock_rules() const;
    std::string effective_labels() const; // empty when no sidecar exists

    // Throws a config error on out-of-range values (weights negative or both
    // zero; thresholds outside [0,1]; non-positive limits; live mode without
    // an endpoint).
    void validate() const;

    // Round-trippable dump for --print-config; the API key is reported only
    // as api_key_set to keep the output safe to share.
    nlohmann::json to_json() const;
};

// Applies one overlay; unknown keys raise a config error naming the key.
// Accepted keys: cee, labels, known_throws, mock_rules, out, alpha, beta,
// gamma, delta, theta, depth, max_unit_lines, concurrency, mock, endpoint,
// model, api_key.
void apply_overrides(RunConfig& config, const nlohmann::json& overrides);

// Layered resolution. `env` is consulted for SEEKER_API_KEY and
// SEEKER_ENDPOINT. When some layer supplies an endpoint but none sets `mock`
// explicitly, mock flips to false. The result is validated.
RunConfig resolve(const std::optional<std::string>& config_file,
                  const std::map<std::string, std::string>& env,
                  const nlohmann::json& flag_overrides);

// resolve() against the real process environment.
RunConfig resolve_from_process_env(const std::optional<std::string>& config_file,
                                   const nlohmann::json& flag_overrides);

} // namespace seeker::cfg
