// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "harness/campaign.hpp"
#include "json.hpp"
#include "raptr/raptr.h"

struct raptr_scenario {
    raptr::sim::ScenarioConfig config;
};

struct raptr_report {
    raptr::sim::RunReport report;
    std::string json;
};

struct raptr_campaign {
    raptr::harness::CampaignResult result;
    std::string summary;
    std::string json;
};

namespace {

thread_local std::string last_error;

raptr_status fail(raptr_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Maps the exception in flight to a status.
raptr_status translate() {
    try {
        throw;
    } catch (const raptr::ConfigError& e) {
        return fail(RAPTR_ERR_INVALID_SCENARIO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RAPTR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RAPTR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RAPTR_ERR_INTERNAL, "unknown error");
    }
}

raptr_status parse_text(const std::string& text, raptr_scenario** out) {
    if (!nlohmann::json::accept(text)) return fail(RAPTR_ERR_PARSE, "scenario is not valid JSON");
    try {
        *out = new raptr_scenario{raptr::sim::ScenarioConfig::parse(text)};
        return RAPTR_OK;
    } catch (...) {
        return translate();
    }
}

}  // namespace

extern "C" {

const char* raptr_version(void) { return "1.0.0"; }

const char* raptr_last_error(void) { return last_error.c_str(); }

raptr_status raptr_scenario_load(const char* path, raptr_scenario** out) {
    if (!path || !out) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    std::ifstream in(path);
    if (!in) return fail(RAPTR_ERR_IO, std::string("cannot open '") + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), out);
}

raptr_status raptr_scenario_parse(const char* json_text, raptr_scenario** out) {
    if (!json_text || !out) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    return parse_text(json_text, out);
}

raptr_status raptr_scenario_serialize(const raptr_scenario* s, char** out) {
    if (!s || !out) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    try {
        *out = dup_string(s->config.serialize());
        return *out ? RAPTR_OK : fail(RAPTR_ERR_INTERNAL, "out of memory");
    } catch (...) {
        return translate();
    }
}

raptr_status raptr_scenario_set_seed(raptr_scenario* s, uint64_t seed) {
    if (!s) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null scenario");
    s->config.seed = seed;
    return RAPTR_OK;
}

raptr_status raptr_scenario_set_variant(raptr_scenario* s, const char* variant) {
    if (!s || !variant) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    auto v = raptr::parse_variant(variant);
    if (!v) return fail(RAPTR_ERR_INVALID_ARGUMENT, std::string("unknown variant '") + variant + "'");
    s->config.protocol.variant = *v;
    return RAPTR_OK;
}

raptr_status raptr_scenario_set_hop_count_mode(raptr_scenario* s, int enabled) {
    if (!s) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null scenario");
    if (enabled && !s->config.network.all_fixed())
        return fail(RAPTR_ERR_HOP_COUNT_MODE, "hop-count mode needs fixed delays on every channel");
    s->config.hop_count_mode = enabled != 0;
    return RAPTR_OK;
}

void raptr_scenario_free(raptr_scenario* s) { delete s; }

raptr_status raptr_run(const raptr_scenario* s, raptr_report** out) {
    if (!s || !out) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    try {
        auto r = std::make_unique<raptr_report>();
        r->report = raptr::sim::run_scenario(s->config);
        r->json = r->report.to_json();
        *out = r.release();
        return RAPTR_OK;
    } catch (...) {
        return translate();
    }
}

raptr_verdict raptr_report_verdict(const raptr_report* r) {
    if (!r) return RAPTR_VERDICT_PASS;
    return static_cast<raptr_verdict>(r->report.verdict);
}

const char* raptr_report_json(const raptr_report* r) { return r ? r->json.c_str() : ""; }

const char* raptr_report_counterexample(const raptr_report* r) { return r ? r->report.counterexample.c_str() : ""; }

void raptr_report_free(raptr_report* r) { delete r; }

raptr_status raptr_campaign_run(const raptr_scenario* s, const char* seeds, unsigned parallelism,
                                raptr_campaign** out) {
    if (!s || !seeds || !out) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    std::vector<std::uint64_t> list;
    try {
        list = raptr::harness::parse_seeds(seeds);
    } catch (const std::exception& e) {
        return fail(RAPTR_ERR_INVALID_ARGUMENT, e.what());
    }
    try {
        auto c = std::make_unique<raptr_campaign>();
        c->result = raptr::harness::run_campaign(s->config, list, parallelism);
        c->summary = c->result.summary();
        c->json = c->result.to_json();
        *out = c.release();
        return RAPTR_OK;
    } catch (...) {
        return translate();
    }
}

size_t raptr_campaign_failures(const raptr_campaign* c) {
    return c ? c->result.safety_failures + c->result.liveness_failures : 0;
}

int raptr_campaign_first_failing_seed(const raptr_campaign* c, uint64_t* seed) {
    if (!c || !c->result.first_failing_seed) return 0;
    if (seed) *seed = *c->result.first_failing_seed;
    return 1;
}

const char* raptr_campaign_summary(const raptr_campaign* c) { return c ? c->summary.c_str() : ""; }

const char* raptr_campaign_json(const raptr_campaign* c) { return c ? c->json.c_str() : ""; }

const char* raptr_campaign_counterexample(const raptr_campaign* c) {
    return c ? c->result.counterexample.c_str() : "";
}

void raptr_campaign_free(raptr_campaign* c) { delete c; }

raptr_status raptr_compare(const raptr_scenario* s, const char* variants, const char* seeds, unsigned parallelism,
                           char** table, char** json) {
    if (!s || !seeds || !table || !json) return fail(RAPTR_ERR_INVALID_ARGUMENT, "null argument");
    std::vector<raptr::Variant> list;
    std::vector<std::uint64_t> seed_list;
    try {
        seed_list = raptr::harness::parse_seeds(seeds);
    } catch (const std::exception& e) {
        return fail(RAPTR_ERR_INVALID_ARGUMENT, e.what());
    }
    if (!variants) {
        list = {raptr::Variant::kRaptr, raptr::Variant::kBabyRaptr, raptr::Variant::kBaselineQs};
    } else {
        std::string_view rest(variants);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            auto v = raptr::parse_variant(rest.substr(0, comma));
            if (!v) return fail(RAPTR_ERR_INVALID_ARGUMENT, "unknown variant in '" + std::string(variants) + "'");
            list.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (list.empty()) return fail(RAPTR_ERR_INVALID_ARGUMENT, "no variants given");
    }
    try {
        auto result = raptr::harness::compare_variants(s->config, list, seed_list, parallelism);
        *table = dup_string(result.table());
        *json = dup_string(result.to_json());
        return RAPTR_OK;
    } catch (...) {
        return translate();
    }
}

void raptr_string_free(char* s) { std::free(s); }

}  // extern "C"
