// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace raptr::harness {

using nlohmann::json;

namespace {

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ConfigError("bad seed value '" + std::string(s) + "'");
    return v;
}

void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& body) {
    if (parallelism == 0) parallelism = std::max(1u, std::thread::hardware_concurrency());
    parallelism = static_cast<unsigned>(std::min<std::size_t>(parallelism, std::max<std::size_t>(count, 1)));
    if (parallelism <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < parallelism; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(std::string_view spec) {
    std::vector<std::uint64_t> out;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const auto part = spec.substr(0, comma);
        const auto dash = part.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_u64(part));
        } else {
            const auto lo = parse_u64(part.substr(0, dash));
            const auto hi = parse_u64(part.substr(dash + 1));
            if (hi < lo) throw ConfigError("empty seed range '" + std::string(part) + "'");
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        }
        if (comma == std::string_view::npos) break;
        spec.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ConfigError("no seeds given");
    return out;
}

CampaignResult run_campaign(const sim::ScenarioConfig& base, const std::vector<std::uint64_t>& seeds,
                            unsigned parallelism) {
    base.validate();
    CampaignResult result;
    result.scenario = base.name;
    result.variant = base.protocol.variant;
    result.outcomes.resize(seeds.size());
    parallel_for(seeds.size(), parallelism, [&](std::size_t i) {
        auto cfg = base;
        cfg.seed = seeds[i];
        auto report = sim::Simulation(cfg).run();
        auto& o = result.outcomes[i];
        o.seed = seeds[i];
        o.verdict = report.verdict;
        o.ordering_p50 = report.metrics.ordering.p50;
        o.rounds = report.min_round;
        if (!report.violations.empty()) {
            const auto& v = report.violations.front();
            o.detail = std::string(sim::to_string(v.kind)) + ": " + v.detail;
        }
    });
    for (const auto& o : result.outcomes) {
        switch (o.verdict) {
            case sim::Verdict::kPass: ++result.passed; break;
            case sim::Verdict::kSafetyViolation: ++result.safety_failures; break;
            case sim::Verdict::kLivenessViolation: ++result.liveness_failures; break;
        }
        if (o.verdict != sim::Verdict::kPass && (!result.first_failing_seed || o.seed < *result.first_failing_seed))
            result.first_failing_seed = o.seed;
    }
    if (result.first_failing_seed) {
        auto cfg = base;
        cfg.seed = *result.first_failing_seed;
        result.counterexample = sim::run_scenario(cfg).counterexample;
    }
    return result;
}

std::string CampaignResult::summary() const {
    std::string s = scenario + " [" + std::string(to_string(variant)) + "]: " + std::to_string(outcomes.size()) +
                    " runs, " + std::to_string(passed) + " passed, " + std::to_string(safety_failures) +
                    " safety violations, " + std::to_string(liveness_failures) + " liveness violations";
    if (first_failing_seed) {
        s += "; first failing seed " + std::to_string(*first_failing_seed);
        for (const auto& o : outcomes)
            if (o.seed == *first_failing_seed && !o.detail.empty()) s += " (" + o.detail + ")";
    }
    return s;
}

std::string CampaignResult::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["variant"] = to_string(variant);
    j["runs"] = outcomes.size();
    j["passed"] = passed;
    j["safety_failures"] = safety_failures;
    j["liveness_failures"] = liveness_failures;
    j["first_failing_seed"] = first_failing_seed ? json(*first_failing_seed) : json(nullptr);
    json seeds = json::array();
    for (const auto& o : outcomes)
        seeds.push_back({{"seed", o.seed},
                         {"verdict", sim::to_string(o.verdict)},
                         {"rounds", o.rounds},
                         {"ordering_p50", o.ordering_p50},
                         {"detail", o.detail}});
    j["seeds"] = seeds;
    return j.dump(2);
}

CompareResult compare_variants(const sim::ScenarioConfig& base, const std::vector<Variant>& variants,
                               const std::vector<std::uint64_t>& seeds, unsigned parallelism) {
    CompareResult result;
    result.scenario = base.name;
    for (Variant v : variants) {
        auto cfg = base;
        cfg.protocol.variant = v;
        cfg.validate();
        std::vector<sim::RunReport> reports(seeds.size());
        parallel_for(seeds.size(), parallelism, [&](std::size_t i) {
            auto c = cfg;
            c.seed = seeds[i];
            reports[i] = sim::Simulation(c).run();
        });
        CompareRow row;
        row.variant = v;
        row.runs = reports.size();
        double hop_o = 0, hop_c = 0;
        for (const auto& r : reports) {
            if (r.verdict != sim::Verdict::kPass) ++row.failures;
            row.ordering_p50 += r.metrics.ordering.p50;
            row.consensus_p50 += r.metrics.consensus.p50;
            row.dissemination_p50 += r.metrics.dissemination.p50;
            row.throughput_tps += r.metrics.throughput_tps;
            row.tc_rate += r.metrics.tc_rate;
            row.blocks_per_second += r.metrics.blocks_per_second;
            for (const auto& [p, c] : r.metrics.prefix_histogram) row.prefix_histogram[p] += c;
            if (r.hops) {
                hop_o += r.hops->ordering;
                hop_c += r.hops->consensus;
            }
        }
        if (!reports.empty()) {
            const double k = static_cast<double>(reports.size());
            row.ordering_p50 /= k;
            row.consensus_p50 /= k;
            row.dissemination_p50 /= k;
            row.throughput_tps /= k;
            row.tc_rate /= k;
            row.blocks_per_second /= k;
            if (cfg.hop_count_mode) {
                row.hop_ordering = hop_o / k;
                row.hop_consensus = hop_c / k;
            }
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string CompareResult::table() const {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %5s %5s %12s %12s %12s %10s %8s %9s %8s %8s\n", "variant", "runs", "fail",
                  "ordering_p50", "consensus_p50", "dissem_p50", "tps", "tc_rate", "blocks/s", "hop_ord", "hop_con");
    out += line;
    for (const auto& r : rows) {
        auto hop = [](const std::optional<double>& h) { return h ? *h : -1.0; };
        std::snprintf(line, sizeof line, "%-12s %5zu %5zu %12.1f %12.1f %12.1f %10.1f %8.4f %9.2f %8.2f %8.2f\n",
                      std::string(to_string(r.variant)).c_str(), r.runs, r.failures, r.ordering_p50, r.consensus_p50,
                      r.dissemination_p50, r.throughput_tps, r.tc_rate, r.blocks_per_second, hop(r.hop_ordering),
                      hop(r.hop_consensus));
        out += line;
        std::string hist = "  prefix histogram:";
        for (const auto& [p, c] : r.prefix_histogram) hist += " " + std::to_string(p) + ":" + std::to_string(c);
        out += hist + "\n";
    }
    return out;
}

std::string CompareResult::to_json() const {
    json j;
    j["scenario"] = scenario;
    json rows_json = json::array();
    for (const auto& r : rows) {
        json hist = json::object();
        for (const auto& [p, c] : r.prefix_histogram) hist[std::to_string(p)] = c;
        json row = {{"variant", to_string(r.variant)},
                    {"runs", r.runs},
                    {"failures", r.failures},
                    {"ordering_p50", r.ordering_p50},
                    {"consensus_p50", r.consensus_p50},
                    {"dissemination_p50", r.dissemination_p50},
                    {"throughput_tps", r.throughput_tps},
                    {"tc_rate", r.tc_rate},
                    {"blocks_per_second", r.blocks_per_second},
                    {"prefix_histogram", hist}};
        if (r.hop_ordering) row["hop_ordering"] = *r.hop_ordering;
        if (r.hop_consensus) row["hop_consensus"] = *r.hop_consensus;
        rows_json.push_back(row);
    }
    j["rows"] = rows_json;
    return j.dump(2);
}

}  // namespace raptr::harness
