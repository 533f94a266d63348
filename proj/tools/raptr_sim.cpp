// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

// raptr-sim: run, campaign and compare subcommands over the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "raptr/raptr.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string seeds = "1-100";
    std::string out;
    std::string variant;
    bool hop_count_mode = false;
    unsigned parallelism = 0;
};

struct ScenarioDeleter {
    void operator()(raptr_scenario* s) const { raptr_scenario_free(s); }
};
using ScenarioHandle = std::unique_ptr<raptr_scenario, ScenarioDeleter>;

int error(const char* what) {
    std::fprintf(stderr, "raptr-sim: %s: %s\n", what, raptr_last_error());
    return kExitUsage;
}

fs::path output_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("RAPTR_OUT_DIR"); env && *env) return env;
    return "raptr-out";
}

bool write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        std::fprintf(stderr, "raptr-sim: cannot write %s\n", path.c_str());
        return false;
    }
    return true;
}

// Loads the scenario and applies the command-line overrides.
ScenarioHandle load(const Options& o, int& status) {
    raptr_scenario* raw = nullptr;
    if (raptr_scenario_load(o.scenario.c_str(), &raw) != RAPTR_OK) {
        status = error("cannot load scenario");
        return nullptr;
    }
    ScenarioHandle s(raw);
    if (o.seed && raptr_scenario_set_seed(s.get(), *o.seed) != RAPTR_OK) {
        status = error("bad seed");
        return nullptr;
    }
    if (!o.variant.empty() && o.variant.find(',') == std::string::npos &&
        raptr_scenario_set_variant(s.get(), o.variant.c_str()) != RAPTR_OK) {
        status = error("bad variant");
        return nullptr;
    }
    if (o.hop_count_mode && raptr_scenario_set_hop_count_mode(s.get(), 1) != RAPTR_OK) {
        status = error("hop-count mode rejected");
        return nullptr;
    }
    status = kExitPass;
    return s;
}

std::string stem(const Options& o) { return fs::path(o.scenario).stem().string(); }

int cmd_run(const Options& o) {
    int status = 0;
    auto s = load(o, status);
    if (!s) return status;
    raptr_report* report = nullptr;
    if (raptr_run(s.get(), &report) != RAPTR_OK) return error("run failed");
    const fs::path dir = output_dir(o);
    const std::string base = stem(o) + (o.seed ? "-seed" + std::to_string(*o.seed) : std::string());
    const std::string json = raptr_report_json(report);
    const auto verdict = raptr_report_verdict(report);
    bool ok = write_file(dir / (base + ".report.json"), json);
    std::printf("%s\n", json.c_str());
    if (verdict == RAPTR_VERDICT_SAFETY_VIOLATION) {
        const fs::path cx = dir / (base + ".counterexample.txt");
        ok = write_file(cx, raptr_report_counterexample(report)) && ok;
        std::fprintf(stderr, "raptr-sim: safety violation; counterexample in %s\n", cx.c_str());
    } else if (verdict == RAPTR_VERDICT_LIVENESS_VIOLATION) {
        std::fprintf(stderr, "raptr-sim: liveness violation\n");
    }
    raptr_report_free(report);
    if (!ok) return kExitUsage;
    return verdict == RAPTR_VERDICT_PASS ? kExitPass : kExitViolation;
}

int cmd_campaign(const Options& o) {
    int status = 0;
    auto s = load(o, status);
    if (!s) return status;
    raptr_campaign* c = nullptr;
    if (raptr_campaign_run(s.get(), o.seeds.c_str(), o.parallelism, &c) != RAPTR_OK) return error("campaign failed");
    const fs::path dir = output_dir(o);
    std::printf("%s\n", raptr_campaign_summary(c));
    bool ok = write_file(dir / (stem(o) + ".campaign.json"), raptr_campaign_json(c));
    std::uint64_t seed = 0;
    const bool failed = raptr_campaign_first_failing_seed(c, &seed) != 0;
    if (failed && *raptr_campaign_counterexample(c)) {
        const fs::path cx = dir / (stem(o) + "-seed" + std::to_string(seed) + ".counterexample.txt");
        ok = write_file(cx, raptr_campaign_counterexample(c)) && ok;
        std::fprintf(stderr, "raptr-sim: counterexample in %s\n", cx.c_str());
    }
    raptr_campaign_free(c);
    if (!ok) return kExitUsage;
    return failed ? kExitViolation : kExitPass;
}

int cmd_compare(const Options& o) {
    Options base = o;
    base.variant.clear();
    int status = 0;
    auto s = load(base, status);
    if (!s) return status;
    char* table = nullptr;
    char* json = nullptr;
    if (raptr_compare(s.get(), o.variant.empty() ? nullptr : o.variant.c_str(), o.seeds.c_str(), o.parallelism,
                      &table, &json) != RAPTR_OK)
        return error("compare failed");
    std::printf("%s", table);
    const bool ok = write_file(output_dir(o) / (stem(o) + ".compare.json"), json);
    raptr_string_free(table);
    raptr_string_free(json);
    return ok ? kExitPass : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator for prefix-consensus BFT protocols"};
    app.require_subcommand(1);
    app.set_version_flag("--version", raptr_version());

    Options o;
    auto common = [&o](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Output directory (default: $RAPTR_OUT_DIR or ./raptr-out)");
        sub->add_flag("--hop-count-mode", o.hop_count_mode, "Report per-phase message-delay counts");
    };

    auto* run = app.add_subcommand("run", "Run one seed and report");
    common(run);
    run->add_option("--seed", o.seed, "Seed (default: the scenario's)");
    run->add_option("--variant", o.variant, "RAPTR, BABY_RAPTR or BASELINE_QS");

    auto* campaign = app.add_subcommand("campaign", "Run many seeds and check every one");
    common(campaign);
    campaign->add_option("--seeds", o.seeds, "Seeds, e.g. 1-1000 or 3,5,9-12")->capture_default_str();
    campaign->add_option("--parallelism", o.parallelism, "Worker threads (0 = one per core)");
    campaign->add_option("--variant", o.variant, "RAPTR, BABY_RAPTR or BASELINE_QS");

    auto* compare = app.add_subcommand("compare", "Run variants side by side on the same seeds");
    common(compare);
    compare->add_option("--seeds", o.seeds, "Seeds, e.g. 1-20")->capture_default_str();
    compare->add_option("--parallelism", o.parallelism, "Worker threads (0 = one per core)");
    compare->add_option("--variant", o.variant, "Comma-separated variants (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*run) return cmd_run(o);
    if (*campaign) return cmd_campaign(o);
    return cmd_compare(o);
}
