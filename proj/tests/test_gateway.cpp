#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "seeker/errors.hpp"
#include "seeker/gateway.hpp"
#include "seeker/text_util.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

using namespace seeker;
using namespace seeker::gateway;

namespace {

const std::string kData = SEEKER_DATA_DIR;

const std::string kFragileSample =
    "String fileName = \"nonexistentfile.txt\";\n"
    "FileReader fileReader = new FileReader(fileName);\n";

const std::string kIoScenario =
    "attempt to read from or write to a file/stream/network connection";

MockRules rules() { return MockRules::load(kData + "/mock_rules.json"); }

std::shared_ptr<Gateway> mock_gateway(GatewayOptions opts = {}) {
    return std::make_shared<Gateway>(std::make_shared<MockTransport>(rules()),
                                     std::move(opts));
}

// Transport that fails schema validation a fixed number of times.
class FlakyTransport : public Transport {
public:
    explicit FlakyTransport(int garbage_responses) : remaining_(garbage_responses) {}
    std::string send(const std::string& prompt) override {
        if (remaining_-- > 0) return "this is not json";
        MockTransport inner{MockRules{}};
        return inner.send(prompt);
    }

private:
    int remaining_;
};

class SlowCountingTransport : public Transport {
public:
    std::string send(const std::string&) override {
        int now = ++current_;
        peak_ = std::max(peak_.load(), now);
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --current_;
        return "ok";
    }
    int peak() const { return peak_.load(); }

private:
    std::atomic<int> current_{0};
    std::atomic<int> peak_{0};
};

} // namespace

TEST_CASE("render: detector template carries its literal section headers") {
    auto prompt = render(find_template("detector_scenario"),
                         {{"scenario", "- IOException: " + kIoScenario},
                          {"code", kFragileSample}});
    CHECK(prompt.find("[Scenario description]") != std::string::npos);
    CHECK(prompt.find("[Java code]") != std::string::npos);
    CHECK(prompt.find(kIoScenario) != std::string::npos);
    CHECK(prompt.find("{scenario}") == std::string::npos);
    CHECK(prompt.find("{code}") == std::string::npos);
    // escaped braces around the response sketch survive as literal braces
    CHECK(prompt.find("{\n    \"code_with_label\": ...\n}") != std::string::npos);
}

TEST_CASE("render: template with zero placeholders returns the body unchanged") {
    PromptTemplate plain{"adhoc", "no placeholders in here, not even braces"};
    CHECK(render(plain, {}) == plain.body);
}

TEST_CASE("render: predator output embeds the bound branch list") {
    auto prompt = render(find_template("predator"),
                         {{"code_unit", kFragileSample},
                          {"code_summary", "opens a file reader"},
                          {"exception_branches", "- IOException: " + kIoScenario}});
    CHECK(prompt.find("[Potential Exception Branches]\n- IOException: " + kIoScenario) !=
          std::string::npos);
}

TEST_CASE("render: missing binding names the placeholder") {
    CHECK_THROWS_WITH_AS(render(find_template("detector_scenario"), {{"code", "x"}}),
                         doctest::Contains("'scenario'"), Error);
}

TEST_CASE("mock detector labels the file-reader line with the IO scenario") {
    auto gw = mock_gateway();
    auto c = gw->complete("detector_scenario", {{"scenario", "- IOException: " + kIoScenario},
                                               {"code", kFragileSample}});
    REQUIRE(c.parsed.contains("code_with_label"));
    const auto& rows = c.parsed.at("code_with_label");
    REQUIRE(rows.size() == 2);
    // oracle: a line is labeled iff a scenario content word (length >= 4) is
    // a substring of the lowercased line
    auto lines = text::split_lines(kFragileSample);
    for (const auto& row : rows) {
        std::size_t idx = row.at("line").get<std::size_t>() - 1;
        std::string lower = text::to_lower(lines.at(idx));
        bool expect = false;
        for (const auto& w : text::words(kIoScenario))
            if (w.size() >= 4 && lower.find(w) != std::string::npos) expect = true;
        bool got = row.at("labels").at(0).get<std::string>() == "IOException";
        CHECK(got == expect);
    }
    // the FileReader line itself must be flagged
    CHECK(rows.at(1).at("labels").at(0) == "IOException");
}

TEST_CASE("mock genscenario parses against its schema") {
    auto gw = mock_gateway();
    auto c = gw->complete("genscenario",
                          {{"sample_desc", kIoScenario}, {"ename", "SocketException"}});
    REQUIRE(c.parsed.contains("scenario"));
    auto text = c.parsed.at("scenario").get<std::string>();
    CHECK(text.find("socket exception") != std::string::npos);
}

TEST_CASE("mock ranker scores match the documented keyword rules") {
    auto gw = mock_gateway();
    std::string seg = "FileReader fileReader = new FileReader(fileName);";
    auto c = gw->complete(
        "ranker",
        {{"strategy1", "wrap in try/catch"},
         {"info1", "Type=IOException ;; Scenario=" + kIoScenario + " ;; Segment=" + seg}});
    REQUIRE(c.parsed.contains("Exceptions"));
    const auto& e = c.parsed.at("Exceptions").at(0);
    CHECK(e.at("ExceptionType") == "IOException");
    // "new filereader" is in the keyword table for IOException
    CHECK(e.at("LikelihoodScore").get<double>() == doctest::Approx(0.9));
    CHECK(e.at("SuitabilityScore").get<double>() == doctest::Approx(0.8));
}

TEST_CASE("mock ranker likelihood without a keyword hit is the word fraction") {
    auto gw = mock_gateway();
    std::string scen = "attempt to divide an integer quantity";
    std::string seg = "int x = attempt / quantity;";
    auto c = gw->complete("ranker", {{"strategy1", "s"},
                                     {"info1", "Type=ArithmeticException ;; Scenario=" +
                                                   scen + " ;; Segment=" + seg}});
    // content words (>=4 chars): attempt, divide, integer, quantity; the
    // segment contains "attempt" and "quantity" -> 2/4
    CHECK(c.parsed.at("Exceptions").at(0).at("LikelihoodScore").get<double>() ==
          doctest::Approx(0.5));
}

TEST_CASE("mock transport is a pure function of the prompt") {
    MockTransport a{rules()}, b{rules()};
    auto prompt = render(find_template("detector_scenario"),
                         {{"scenario", "- IOException: " + kIoScenario},
                          {"code", kFragileSample}});
    CHECK(a.send(prompt) == a.send(prompt));
    CHECK(a.send(prompt) == b.send(prompt));
}

TEST_CASE("retry: malformed response then valid gives attempts = 2") {
    GatewayOptions opts;
    opts.cache_enabled = false;
    Gateway gw(std::make_shared<FlakyTransport>(1), opts);
    auto c = gw.complete("genscenario", {{"sample_desc", "d"}, {"ename", "IOException"}});
    CHECK(c.attempts == 2);
    CHECK(gw.transport_calls() == 2);
}

TEST_CASE("retry: exhausted retries raises a parse error with the raw text") {
    GatewayOptions opts;
    opts.cache_enabled = false;
    opts.max_retries = 2;
    Gateway gw(std::make_shared<FlakyTransport>(99), opts);
    CHECK_THROWS_WITH_AS(
        gw.complete("genscenario", {{"sample_desc", "d"}, {"ename", "IOException"}}),
        doctest::Contains("this is not json"), Error);
    CHECK(gw.transport_calls() == 3); // initial try + 2 retries
}

TEST_CASE("cache: identical call twice served without transport") {
    auto gw = mock_gateway();
    Bindings b{{"sample_desc", "d"}, {"ename", "IOException"}};
    auto first = gw->complete("genscenario", b);
    CHECK_FALSE(first.from_cache);
    CHECK(gw->transport_calls() == 1);
    auto second = gw->complete("genscenario", b);
    CHECK(second.from_cache);
    CHECK(second.response == first.response);
    CHECK(gw->transport_calls() == 1);
}

TEST_CASE("cache: differing model id misses") {
    Bindings b{{"sample_desc", "d"}, {"ename", "IOException"}};
    CHECK(cache_key("genscenario", b, "model-a") != cache_key("genscenario", b, "model-b"));
}

TEST_CASE("cache: disabled flag always misses") {
    GatewayOptions opts;
    opts.cache_enabled = false;
    auto gw = mock_gateway(opts);
    Bindings b{{"sample_desc", "d"}, {"ename", "IOException"}};
    gw->complete("genscenario", b);
    gw->complete("genscenario", b);
    CHECK(gw->transport_calls() == 2);
}

TEST_CASE("cache: persists across gateway instances via the cache dir") {
    auto dir = std::filesystem::temp_directory_path() / "seeker_gwcache_test";
    std::filesystem::remove_all(dir);
    GatewayOptions opts;
    opts.cache_dir = dir.string();
    Bindings b{{"sample_desc", "d"}, {"ename", "IOException"}};
    auto first = mock_gateway(opts)->complete("genscenario", b);
    auto gw2 = mock_gateway(opts);
    auto second = gw2->complete("genscenario", b);
    CHECK(second.from_cache);
    CHECK(second.response == first.response);
    CHECK(gw2->transport_calls() == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("concurrency: in-flight limit is enforced") {
    auto transport = std::make_shared<SlowCountingTransport>();
    GatewayOptions opts;
    opts.cache_enabled = false;
    opts.concurrency_limit = 2;
    Gateway gw(transport, opts);
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&, i] {
            gw.complete_prompt("", "probe " + std::to_string(i), "k" + std::to_string(i));
        });
    for (auto& t : threads) t.join();
    CHECK(transport->peak() <= 2);
    CHECK(gw.transport_calls() == 8);
}
