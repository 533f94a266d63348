// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sim/simulation.hpp"

namespace raptr::harness {

// "7", "1-1000" or "3,5,9-12".
std::vector<std::uint64_t> parse_seeds(std::string_view spec);

struct SeedOutcome {
    std::uint64_t seed = 0;
    sim::Verdict verdict = sim::Verdict::kPass;
    std::string detail;
    double ordering_p50 = 0;
    Round rounds = 0;
};

struct CampaignResult {
    std::string scenario;
    Variant variant = Variant::kRaptr;
    std::vector<SeedOutcome> outcomes;
    std::size_t passed = 0;
    std::size_t safety_failures = 0;
    std::size_t liveness_failures = 0;
    std::optional<std::uint64_t> first_failing_seed;
    std::string counterexample;

    bool ok() const { return safety_failures == 0 && liveness_failures == 0; }
    std::string summary() const;
    std::string to_json() const;
};

// Runs every seed on `parallelism` threads (0 = hardware concurrency). The
// per-seed outcomes do not depend on the thread count.
CampaignResult run_campaign(const sim::ScenarioConfig& base, const std::vector<std::uint64_t>& seeds,
                            unsigned parallelism = 0);

struct CompareRow {
    Variant variant = Variant::kRaptr;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double ordering_p50 = 0;
    double consensus_p50 = 0;
    double dissemination_p50 = 0;
    double throughput_tps = 0;
    double tc_rate = 0;
    double blocks_per_second = 0;
    std::optional<double> hop_ordering;
    std::optional<double> hop_consensus;
    std::map<Prefix, std::uint64_t> prefix_histogram;
};

struct CompareResult {
    std::string scenario;
    std::vector<CompareRow> rows;

    std::string table() const;
    std::string to_json() const;
};

// Runs each variant on the same seeds; values are means over seeds.
CompareResult compare_variants(const sim::ScenarioConfig& base, const std::vector<Variant>& variants,
                               const std::vector<std::uint64_t>& seeds, unsigned parallelism = 0);

}  // namespace raptr::harness
