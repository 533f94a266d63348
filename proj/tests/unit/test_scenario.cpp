// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include <filesystem>

#include "doctest.h"
#include "sim/scenario.hpp"
#include "support/scenarios.hpp"

using namespace raptr;
using namespace raptr::sim;
using nlohmann::json;

TEST_CASE("shipped scenarios load, validate and round-trip") {
    std::size_t found = 0;
    for (const auto& e : std::filesystem::directory_iterator(RAPTR_SCENARIO_DIR)) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        auto cfg = ScenarioConfig::load_file(e.path().string());
        CHECK_NOTHROW(cfg.validate());
        const auto text = cfg.serialize();
        CHECK(ScenarioConfig::parse(text).serialize() == text);
        ++found;
    }
    CHECK(found >= 10);
}

TEST_CASE("defaults derive the quorum from f") {
    auto cfg = test::scenario(test::n10());
    CHECK(cfg.protocol.n == 10);
    CHECK(cfg.protocol.quorum_size == 7);
    CHECK(cfg.honest_mask() == std::vector<bool>(10, true));
}

TEST_CASE("bad scenarios are rejected with a reason") {
    auto rejects = [](const json& patch, const char* needle) {
        CAPTURE(patch.dump());
        try {
            (void)test::scenario(patch);
            FAIL("accepted");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    rejects({{"bogus", 1}}, "unknown key");
    rejects({{"protocol", {{"availability", 4}}}}, "availability");
    rejects({{"protocol", {{"n", 5}}}}, "3f+1");
    rejects({{"protocol", {{"variant", "PBFT"}}}}, "unknown variant");
    rejects({{"network", {{"delay", {{"kind", "fixed"}, {"value", 1500}}}}}}, "delay bound");
    rejects({{"network", {{"delay", {{"kind", "warp"}}}}}}, "unknown delay kind");
    rejects({{"faults", json::array({{{"type", "crash"}, {"replica", 0}}, {{"type", "crash"}, {"replica", 1}}})}},
            "fault budget");
    rejects({{"faults", json::array({{{"type", "crash"}, {"replica", 7}}})}}, ">= n");
    rejects({{"faults", json::array({{{"type", "byzantine"}, {"replica", 1}, {"behavior", "rude"}}})}},
            "unknown byzantine behavior");
    rejects({{"faults", json::array({{{"type", "drop"}, {"replicas", {1}}, {"rate", 1.5}}})}}, "drop rate");
    rejects({{"horizon", {{"rounds", 0}}}}, "horizon");
    rejects({{"checks", {{"metrics_trim", 0.5}}}}, "metrics_trim");
    rejects({{"hop_count_mode", true}, {"network", {{"delay", {{"kind", "uniform"}, {"lo", 1}, {"hi", 900}}}}}},
            "hop-count mode");
    CHECK_THROWS_AS(ScenarioConfig::parse("{not json"), ScenarioError);
    CHECK_THROWS_AS(ScenarioConfig::load_file("/nonexistent/scenario.json"), Error);
}

TEST_CASE("faults mark replicas dishonest") {
    auto cfg = test::scenario({{"faults", json::array({{{"type", "byzantine"}, {"replica", 2}, {"behavior", "silent"}}})}});
    CHECK(cfg.honest_mask() == std::vector<bool>{true, true, false, true});
    auto drops = test::scenario({{"faults", json::array({{{"type", "drop"}, {"replicas", {0, 1, 2, 3}}, {"rate", 0.01}}})}});
    CHECK(drops.honest_mask() == std::vector<bool>(4, true));
}
