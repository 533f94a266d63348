// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   raptr-acceptance [--only N[,N...]] [--seeds K]
//
// --seeds shrinks the safety campaign for local iteration; the default is
// the full 1000 seeds per class.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "harness/campaign.hpp"
#include "oracles/crypto_fuzz.hpp"
#include "oracles/oracles.hpp"
#include "sim/simulation.hpp"
#include "support/scenarios.hpp"

using namespace raptr;
using namespace raptr::sim;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 3) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << v;
    return s.str();
}

json faulty(const std::vector<ReplicaId>& ids, const char* behavior) {
    json out = json::array();
    for (auto id : ids) out.push_back({{"type", "byzantine"}, {"replica", id}, {"behavior", behavior}});
    return out;
}

// 1. Safety campaign ---------------------------------------------------------

Outcome safety_campaign(std::uint64_t seeds) {
    Outcome out;
    const auto seed_list = harness::parse_seeds("1-" + std::to_string(seeds));
    for (bool big : {false, true}) {
        const std::vector<ReplicaId> bad = big ? std::vector<ReplicaId>{1, 4, 7} : std::vector<ReplicaId>{1};
        json size = big ? test::n10() : json::object();
        json light = {{"protocol", {{"batch_interval", 2000}}},
                      {"network", {{"delay", {{"kind", "uniform"}, {"lo", 0}, {"hi", 1000}}}}},
                      {"load", {{"tx_per_second", 500}}},
                      {"horizon", {{"rounds", 200}}}};
        light.merge_patch(size);
        struct Class {
            const char* name;
            json patch;
        };
        std::vector<Class> classes{
            {"equivocating-leader", {{"faults", faulty(bad, "equivocating-proposer")}}},
            {"selective-batch-sender", {{"faults", faulty(bad, "selective-batch-sender")}}},
            {"silent-f", {{"faults", faulty(bad, "silent")}}},
            {"stale-vote-replay", {{"faults", faulty(bad, "stale-vote-replayer")}}},
            {"pre-gst", {{"network", {{"gst", 100000}, {"pre_gst", {{"max_extra_delay", 20000}, {"drop_rate", 0.2}}}}}}},
        };
        for (auto& c : classes) {
            json patch = light;
            patch.merge_patch(c.patch);
            patch["name"] = std::string(c.name) + (big ? "-n10" : "-n4");
            auto cfg = test::scenario(patch);
            const auto t0 = std::chrono::steady_clock::now();
            auto r = harness::run_campaign(cfg, seed_list);
            const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::fprintf(stderr, "  [1] %s: %s (%.0fs)\n", cfg.name.c_str(), r.summary().c_str(), secs);
            out.require(r.safety_failures == 0, cfg.name + " safety (" + r.summary() + ")");
            if (r.liveness_failures > 0) out.note(cfg.name + " liveness failures " + std::to_string(r.liveness_failures));
        }
    }
    out.note(std::to_string(seeds) + " seeds x 5 classes x {n4, n10}, 200 rounds, zero safety violations required");
    return out;
}

// 2. Hop counts --------------------------------------------------------------

Outcome hop_counts() {
    Outcome out;
    for (bool big : {false, true}) {
        json patch = {{"hop_count_mode", true}, {"load", {{"batch_jitter", 500}}}, {"horizon", {{"rounds", 300}}}};
        if (big) patch.merge_patch(test::n10());
        double ordering[2] = {};
        int k = 0;
        for (const char* v : {"RAPTR", "BASELINE_QS"}) {
            patch["protocol"]["variant"] = v;
            auto r = run_scenario(test::scenario(patch));
            const std::string tag = std::string(v) + (big ? "/n10" : "/n4");
            out.require(r.verdict == Verdict::kPass && r.hops && r.hops->samples > 0, tag + " run");
            if (!r.hops) return out;
            ordering[k++] = r.hops->ordering;
            if (std::string(v) == "RAPTR") {
                const bool exact = r.hops->consensus_histogram.size() == 1 && r.hops->consensus_histogram.count(3) == 1;
                out.require(exact && r.hops->consensus == 3.0, tag + " consensus exactly 3 delays");
                out.require(std::abs(r.hops->ordering - 5.0) <= 0.1, tag + " ordering 5 +- 0.1");
            } else {
                out.require(std::abs(r.hops->ordering - 7.0) <= 0.1, tag + " ordering 7 +- 0.1");
            }
            out.note(tag + " consensus " + fmt(r.hops->consensus) + " ordering " + fmt(r.hops->ordering) +
                     " (dissemination " + fmt(r.hops->dissemination) + ", inclusion " + fmt(r.hops->inclusion) + ")");
        }
        out.require(std::abs(ordering[1] - ordering[0] - 2.0) <= 0.2, "gap of 2 delays");
        out.note(std::string(big ? "n10" : "n4") + " gap " + fmt(ordering[1] - ordering[0]));
    }
    return out;
}

// 3. Block cadence -----------------------------------------------------------

Outcome cadence() {
    Outcome out;
    for (bool big : {false, true}) {
        json patch = {{"load", {{"batch_jitter", 500}}}, {"horizon", {{"rounds", 700}}}};
        if (big) patch.merge_patch(test::n10());
        auto cfg = test::scenario(patch);
        auto r = run_scenario(cfg);
        const double d = static_cast<double>(cfg.protocol.delta);
        const auto& m = r.metrics;
        const std::string tag = big ? "n10" : "n4";
        out.require(r.verdict == Verdict::kPass && m.tc_rounds == 0, tag + " fault-free run");
        out.require(m.rounds >= 500, tag + " at least 500 rounds measured");
        out.require(std::abs(m.round_interval_mean / d - 2.0) <= 0.01, tag + " round interval 2 delays");
        out.require(std::abs(m.block_inclusion.mean / d - 1.0) <= 0.1, tag + " block inclusion 1 +- 0.1");
        out.note(tag + " rounds " + std::to_string(m.rounds) + " interval " + fmt(m.round_interval_mean / d) +
                 " inclusion " + fmt(m.block_inclusion.mean / d));
    }
    return out;
}

// 4. Liveness bound ----------------------------------------------------------

Outcome liveness_bound() {
    Outcome out;
    for (bool big : {false, true}) {
        json patch = {{"network", {{"delay", {{"kind", "uniform"}, {"lo", 0}, {"hi", 1000}}}}},
                      {"horizon", {{"rounds", 200}}},
                      {"faults", json::array({{{"type", "crash"}, {"replica", 0}, {"at", 50000}}})}};
        if (big) patch.merge_patch(test::n10());
        std::uint64_t checked = 0, late = 0, missing = 0, failed_runs = 0;
        double worst = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto cfg = test::scenario(patch);
            cfg.seed = seed;
            Simulation s(cfg);
            auto rep = s.run();
            if (rep.verdict != Verdict::kPass) ++failed_runs;
            const double delta = static_cast<double>(cfg.protocol.delta);
            const SimTime bound = std::llround((5.0 + cfg.protocol.epsilon) * delta);
            const auto& timing = s.round_timing();
            const Round last = timing.empty() ? 0 : timing.rbegin()->first;
            for (const auto& [round, t] : timing) {
                // The final rounds have not had time to commit.
                if (round + 5 > last || t.first_entry < cfg.network.gst || !s.honest(t.leader)) continue;
                ++checked;
                bool ok = t.has_block;
                SimTime slowest = 0;
                for (ReplicaId i = 0; ok && i < cfg.protocol.n; ++i) {
                    if (!s.honest(i)) continue;
                    if (t.committed_at.size() <= i || t.committed_at[i] < 0) {
                        ok = false;
                        break;
                    }
                    slowest = std::max(slowest, t.committed_at[i] - t.first_entry);
                }
                if (!ok) {
                    ++missing;
                    continue;
                }
                worst = std::max(worst, static_cast<double>(slowest) / delta);
                if (slowest > bound) ++late;
            }
        }
        const std::string tag = big ? "n10" : "n4";
        out.require(failed_runs == 0, tag + " all runs pass");
        out.require(checked > 0 && late == 0 && missing == 0, tag + " every honest-leader round within (5+eps) Delta");
        out.note(tag + " rounds " + std::to_string(checked) + " late " + std::to_string(late) + " uncommitted " +
                 std::to_string(missing) + " worst " + fmt(worst) + " Delta");
    }
    return out;
}

// 5. Robustness --------------------------------------------------------------

struct Means {
    double ordering_p50 = 0;
    double blocks_per_second = 0;
    double tc_rounds = 0;
    std::size_t failures = 0;
};

Means robustness_run(const char* variant, const json& faults) {
    json patch = test::n10();
    patch.merge_patch({{"protocol", {{"variant", variant}, {"delta", 1500}, {"batch_interval", 150}}},
                       {"network", {{"delay", {{"kind", "fixed"}, {"value", 1000}}}}},
                       {"load", {{"tx_per_second", 13333.33}}},
                       {"horizon", {{"rounds", 200}}},
                       {"faults", faults}});
    Means m;
    const int seeds = 5;
    for (int seed = 1; seed <= seeds; ++seed) {
        auto cfg = test::scenario(patch);
        cfg.seed = static_cast<std::uint64_t>(seed);
        auto r = run_scenario(cfg);
        if (r.verdict != Verdict::kPass) ++m.failures;
        m.ordering_p50 += r.metrics.ordering.p50 / seeds;
        m.blocks_per_second += r.metrics.blocks_per_second / seeds;
        m.tc_rounds += static_cast<double>(r.metrics.tc_rounds);
    }
    return m;
}

Outcome robustness() {
    Outcome out;
    json all = json::array();
    for (ReplicaId i = 0; i < 10; ++i) all.push_back(i);
    const json full = json::array({{{"type", "drop"}, {"replicas", all}, {"rate", 0.01}}});
    const json partial = json::array({{{"type", "drop"}, {"replicas", {9}}, {"rate", 0.01}}});
    const json none = json::array();

    const auto r_ff = robustness_run("RAPTR", none), r_full = robustness_run("RAPTR", full),
               r_part = robustness_run("RAPTR", partial);
    const auto b_ff = robustness_run("BABY_RAPTR", none), b_full = robustness_run("BABY_RAPTR", full),
               b_part = robustness_run("BABY_RAPTR", partial);

    const double r_increase = r_full.ordering_p50 / r_ff.ordering_p50 - 1;
    const double b_drop = b_ff.blocks_per_second / b_full.blocks_per_second;
    const double r_glitch = r_part.ordering_p50 / r_ff.ordering_p50 - 1;
    const double b_glitch = b_part.ordering_p50 / b_ff.ordering_p50 - 1;

    std::size_t failures = 0;
    for (const auto* m : {&r_ff, &r_full, &r_part, &b_ff, &b_full, &b_part}) failures += m->failures;
    out.require(failures == 0, "all runs pass");
    out.require(r_full.tc_rounds == 0, "RAPTR zero TC rounds under 1% drop");
    out.require(r_increase <= 0.25, "RAPTR ordering increase <= 25%");
    out.require(b_drop >= 2.0, "BABY_RAPTR block rate degrades >= 2x");
    out.require(std::abs(r_glitch) <= 0.05, "RAPTR partial glitch within 5%");
    out.require(std::abs(b_glitch) <= 0.05, "BABY_RAPTR partial glitch within 5%");
    out.note("RAPTR tc " + fmt(r_full.tc_rounds, 0) + " p50 " + fmt(r_ff.ordering_p50, 0) + " -> " +
             fmt(r_full.ordering_p50, 0) + " (+" + fmt(100 * r_increase, 1) + "%)");
    out.note("BABY_RAPTR blocks/s " + fmt(b_ff.blocks_per_second, 1) + " -> " + fmt(b_full.blocks_per_second, 1) +
             " (" + fmt(b_drop, 2) + "x)");
    out.note("partial glitch RAPTR " + fmt(100 * r_glitch, 1) + "% BABY_RAPTR " + fmt(100 * b_glitch, 1) + "%");
    return out;
}

// 6. Prefix decoupling -------------------------------------------------------

Outcome prefix_decoupling() {
    Outcome out;
    const ReplicaId byz = 3;
    std::uint64_t blocks[2] = {}, full_qc[2] = {}, full_commit[2] = {};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (int k = 0; k < 2; ++k) {
            const std::uint32_t s_req = k == 0 ? 2 : 3;
            auto cfg = test::scenario(
                {{"protocol", {{"availability", s_req}}},
                 {"horizon", {{"rounds", 100}}},
                 {"faults", json::array({{{"type", "byzantine"},
                                          {"replica", byz},
                                          {"behavior", "selective-batch-sender"},
                                          {"targets", {0}}}})}});
            cfg.seed = seed;
            Simulation sim(cfg);
            auto rep = sim.run();
            out.require(rep.verdict == Verdict::kPass, "S=" + std::to_string(s_req) + " seed " + std::to_string(seed));
            const auto& o = sim.observer();
            if (!o.highest_commit()) continue;
            std::set<Digest> seen;
            for (const auto& e : chain_of(*o.highest_commit(), o.registry())) {
                const Block* b = o.registry().find(e.block);
                if (b->is_genesis()) continue;
                // Blocks that first include the selectively sent batches.
                bool affected = false;
                for (const auto& sub : b->payload().sub_blocks)
                    for (const auto& info : sub)
                        if (info.author == byz && seen.insert(info.digest).second) affected = true;
                if (!affected) continue;
                ++blocks[k];
                if (o.best_qc_prefix(b->round()) == cfg.protocol.sub_blocks) ++full_qc[k];
                if (e.prefix == cfg.protocol.sub_blocks) ++full_commit[k];
            }
        }
    }
    out.require(blocks[0] > 0 && full_qc[0] == blocks[0] && full_commit[0] == blocks[0],
                "S=f+1 full-prefix QC and full commit on every affected block");
    out.require(blocks[1] > 0 && full_qc[1] == 0, "S=2f+1 no full-prefix QC on affected blocks");
    out.note("S=2: " + std::to_string(full_qc[0]) + "/" + std::to_string(blocks[0]) + " full QC, " +
             std::to_string(full_commit[0]) + " full commits");
    out.note("S=3: " + std::to_string(full_qc[1]) + "/" + std::to_string(blocks[1]) + " full QC");
    return out;
}

// 7. Oracle equivalence ------------------------------------------------------

Outcome oracle_equivalence() {
    Outcome out;
    std::uint64_t sweep = 0, sweep_bad = 0;
    std::mt19937_64 rng(17);
    for (const auto& multiset : oracle::vote_multisets(7, 4)) {
        for (std::uint32_t s : {2u, 3u}) {
            const auto expected = oracle::certified_prefix(multiset, s);
            auto order = multiset;
            for (int shuffle = 0; shuffle < 3; ++shuffle) {
                std::shuffle(order.begin(), order.end(), rng);
                std::vector<VotePrefix> votes;
                for (ReplicaId i = 0; i < order.size(); ++i) votes.push_back({i, order[i]});
                ++sweep;
                try {
                    const Prefix got = qc_certified_prefix(votes, s);
                    if (!expected || got != *expected) ++sweep_bad;
                } catch (const MalformedCertificate&) {
                    if (expected) ++sweep_bad;
                }
            }
        }
    }
    out.require(sweep_bad == 0, "certified prefix sweep");
    out.note("sweep " + std::to_string(sweep) + " cases");

    std::uint64_t pairs = 0, pair_bad = 0, skipped = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        json patch = {{"network", {{"delay", {{"kind", "uniform"}, {"lo", 0}, {"hi", 1000}}},
                                   {"gst", 15000},
                                   {"pre_gst", {{"max_extra_delay", 6000}, {"drop_rate", 0.1}}}}},
                      {"horizon", {{"rounds", 25}}},
                      {"faults", json::array({{{"type", "byzantine"}, {"replica", 1}, {"behavior", "equivocating-proposer"}}})}};
        auto cfg = test::scenario(patch);
        cfg.seed = seed;
        Simulation sim(cfg);
        sim.run();
        const auto& store = sim.observer().registry();
        auto lookup = [&](const Digest& d) { return store.find(d); };
        std::vector<QcPtr> qcs;
        for (const auto& b : store.snapshot()) {
            if (b->is_genesis()) {
                qcs.push_back(QuorumCertificate::genesis(b->digest()));
                continue;
            }
            qcs.push_back(b->qc_parent());
            for (Prefix p = 0; p <= cfg.protocol.sub_blocks; ++p) {
                std::vector<VotePrefix> votes{{0, p}, {1, p}};
                qcs.push_back(QuorumCertificate::make(b->round(), b->digest(), votes, AggregateSignature{}, 2));
            }
        }
        std::vector<std::optional<std::vector<oracle::Unit>>> seqs;
        for (const auto& q : qcs) seqs.push_back(oracle::message_sequence(*q, lookup));
        for (std::size_t i = 0; i < qcs.size(); ++i) {
            if (!seqs[i]) {
                ++skipped;
                continue;
            }
            for (std::size_t j = 0; j < qcs.size(); ++j) {
                if (!seqs[j]) continue;
                ++pairs;
                if (is_prefix_of(*qcs[i], *qcs[j], store) != oracle::sequence_prefix(*seqs[i], *seqs[j])) ++pair_bad;
            }
        }
    }
    out.require(pair_bad == 0, "is_prefix_of agrees with the message sequence oracle");
    out.require(pairs > 0, "chain pairs generated");
    out.note(std::to_string(pairs) + " chain pairs from 100 runs, " + std::to_string(pair_bad) + " mismatches, " +
             std::to_string(skipped) + " unavailable chains");
    return out;
}

// 8. Crypto ------------------------------------------------------------------

Outcome crypto_suite() {
    Outcome out;
    for (auto kind : {crypto::SchemeKind::kKeyedHash, crypto::SchemeKind::kEd25519}) {
        const std::size_t n = 10000;
        auto r = fuzz::run_mutation_fuzz(kind, n, 2026);
        const std::string name(crypto::to_string(kind));
        out.require(r.cases == n, name + " all cases combined");
        out.require(r.valid_accepted == r.cases, name + " roundtrips verify");
        out.require(r.mutants_rejected == r.cases, name + " every mutant rejected");
        out.note(name + " " + std::to_string(r.valid_accepted) + "/" + std::to_string(r.cases) + " valid, " +
                 std::to_string(r.mutants_rejected) + " mutants rejected (signer " + std::to_string(r.by_field[0]) +
                 ", prefix " + std::to_string(r.by_field[1]) + ", message " + std::to_string(r.by_field[2]) + ")");
    }
    return out;
}

// 9. Determinism -------------------------------------------------------------

Outcome determinism() {
    Outcome out;
    std::size_t runs = 0;
    for (const char* name : {"fault_free_n4", "fault_free_n10", "crash_leader_n4", "crash_leader_n10",
                             "partial_glitch_n4", "partial_glitch_n10", "full_glitch_n4", "full_glitch_n10",
                             "byzantine_batch_sender_n4", "byzantine_batch_sender_n10"}) {
        auto cfg = ScenarioConfig::load_file(std::string(RAPTR_SCENARIO_DIR) + "/" + name + ".json");
        for (std::uint64_t seed : {1ull, 7ull}) {
            cfg.seed = seed;
            auto a = run_scenario(cfg);
            auto b = run_scenario(cfg);
            bool same_logs = a.replicas.size() == b.replicas.size();
            for (std::size_t i = 0; same_logs && i < a.replicas.size(); ++i)
                same_logs = a.replicas[i].delivered_digest == b.replicas[i].delivered_digest &&
                            a.replicas[i].delivered == b.replicas[i].delivered;
            out.require(a.to_json() == b.to_json(), std::string(name) + " seed " + std::to_string(seed) + " report");
            out.require(same_logs, std::string(name) + " seed " + std::to_string(seed) + " delivered logs");
            ++runs;
        }
    }
    out.note(std::to_string(runs) + " scenario/seed pairs replayed");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    std::uint64_t seeds = 1000;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
        } else if (a == "--seeds" && i + 1 < argc) {
            seeds = std::stoull(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N[,N...]] [--seeds K]\n", argv[0]);
            return 2;
        }
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "safety campaign", [&] { return safety_campaign(seeds); }},
        {2, "hop counts", hop_counts},
        {3, "block cadence", cadence},
        {4, "liveness bound", liveness_bound},
        {5, "robustness", robustness},
        {6, "prefix decoupling", prefix_decoupling},
        {7, "oracle equivalence", oracle_equivalence},
        {8, "crypto suite", crypto_suite},
        {9, "determinism", determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%d] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
