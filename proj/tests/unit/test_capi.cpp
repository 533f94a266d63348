// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include <raptr/raptr.h>

#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string path_of(const char* name) { return std::string(RAPTR_SCENARIO_DIR) + "/" + name + ".json"; }

struct Scenario {
    explicit Scenario(const char* name) { REQUIRE(raptr_scenario_load(path_of(name).c_str(), &s) == RAPTR_OK); }
    ~Scenario() { raptr_scenario_free(s); }
    raptr_scenario* s = nullptr;
};

}  // namespace

TEST_CASE("loading and parsing report typed errors") {
    raptr_scenario* s = nullptr;
    CHECK(raptr_scenario_load("/nonexistent.json", &s) == RAPTR_ERR_IO);
    CHECK(std::string(raptr_last_error()).find("nonexistent") != std::string::npos);
    CHECK(raptr_scenario_parse("{oops", &s) == RAPTR_ERR_PARSE);
    CHECK(raptr_scenario_parse(R"({"protocol": {"n": 5}})", &s) == RAPTR_ERR_INVALID_SCENARIO);
    CHECK(raptr_scenario_parse(nullptr, &s) == RAPTR_ERR_INVALID_ARGUMENT);
    CHECK(s == nullptr);
    CHECK(std::string(raptr_version()).size() > 0);
    raptr_scenario_free(nullptr);
    raptr_report_free(nullptr);
    raptr_campaign_free(nullptr);
    raptr_string_free(nullptr);
}

TEST_CASE("serialize round-trips through parse") {
    Scenario sc("fault_free_n4");
    char* text = nullptr;
    REQUIRE(raptr_scenario_serialize(sc.s, &text) == RAPTR_OK);
    raptr_scenario* copy = nullptr;
    REQUIRE(raptr_scenario_parse(text, &copy) == RAPTR_OK);
    char* again = nullptr;
    REQUIRE(raptr_scenario_serialize(copy, &again) == RAPTR_OK);
    CHECK(std::string(text) == std::string(again));
    raptr_string_free(text);
    raptr_string_free(again);
    raptr_scenario_free(copy);
}

TEST_CASE("setters validate their input") {
    Scenario sc("partial_glitch_n4");
    CHECK(raptr_scenario_set_variant(sc.s, "BABY_RAPTR") == RAPTR_OK);
    CHECK(raptr_scenario_set_variant(sc.s, "HOTSTUFF") == RAPTR_ERR_INVALID_ARGUMENT);
    CHECK(raptr_scenario_set_seed(sc.s, 11) == RAPTR_OK);
    CHECK(raptr_scenario_set_hop_count_mode(sc.s, 1) == RAPTR_ERR_HOP_COUNT_MODE);
    CHECK(raptr_scenario_set_hop_count_mode(sc.s, 0) == RAPTR_OK);
    CHECK(raptr_scenario_set_seed(nullptr, 1) == RAPTR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run returns a JSON report") {
    Scenario sc("fault_free_n4");
    REQUIRE(raptr_scenario_set_hop_count_mode(sc.s, 1) == RAPTR_OK);
    raptr_report* r = nullptr;
    REQUIRE(raptr_run(sc.s, &r) == RAPTR_OK);
    CHECK(raptr_report_verdict(r) == RAPTR_VERDICT_PASS);
    auto j = json::parse(raptr_report_json(r));
    CHECK(j.at("verdict") == "pass");
    CHECK(std::string(raptr_report_counterexample(r)).empty());
    raptr_report_free(r);
    CHECK(raptr_run(nullptr, &r) == RAPTR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("campaigns and comparisons") {
    Scenario sc("fault_free_n4");
    raptr_campaign* c = nullptr;
    CHECK(raptr_campaign_run(sc.s, "1-", 1, &c) == RAPTR_ERR_INVALID_ARGUMENT);
    REQUIRE(raptr_campaign_run(sc.s, "1-2", 2, &c) == RAPTR_OK);
    CHECK(raptr_campaign_failures(c) == 0);
    std::uint64_t seed = 99;
    CHECK(raptr_campaign_first_failing_seed(c, &seed) == 0);
    CHECK(seed == 99);
    CHECK(json::parse(raptr_campaign_json(c)).at("runs") == 2);
    CHECK(std::string(raptr_campaign_summary(c)).find("2 passed") != std::string::npos);
    raptr_campaign_free(c);

    char* table = nullptr;
    char* out = nullptr;
    CHECK(raptr_compare(sc.s, "RAPTR,PBFT", "1", 1, &table, &out) == RAPTR_ERR_INVALID_ARGUMENT);
    REQUIRE(raptr_compare(sc.s, "RAPTR,BASELINE_QS", "1", 1, &table, &out) == RAPTR_OK);
    CHECK(std::string(table).find("BASELINE_QS") != std::string::npos);
    CHECK(json::parse(out).at("rows").size() == 2);
    raptr_string_free(table);
    raptr_string_free(out);
}
