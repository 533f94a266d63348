// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include <deque>

#include "consensus/replica.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace raptr;

namespace {

struct Rejections final : ReplicaObserver {
    void on_rejected(ReplicaId, ReplicaId, std::string_view what) override { kinds.emplace_back(what); }
    std::vector<std::string> kinds;
};

struct Cluster {
    explicit Cluster(Variant v, std::uint32_t f = 1) : config(ProtocolConfig::with_faults(f)) {
        config.variant = v;
        keys = std::make_shared<const crypto::KeyShareSet>(crypto::make_scheme(crypto::SchemeKind::kKeyedHash),
                                                           config.n, config.sub_blocks, 9);
        envs.resize(config.n);
        observers.resize(config.n);
        for (ReplicaId i = 0; i < config.n; ++i)
            replicas.push_back(std::make_unique<Replica>(i, config, keys, envs[i], &observers[i]));
    }

    Replica& operator[](ReplicaId i) { return *replicas[i]; }

    // Moves everything replica `from` emitted so far into the in-flight queue.
    void collect(ReplicaId from) {
        for (auto& s : envs[from].sent) {
            if (s.to == kNoReplica) {
                for (ReplicaId t = 0; t < config.n; ++t) queue.push_back({from, t, s.msg});
            } else {
                queue.push_back({from, s.to, s.msg});
            }
        }
        envs[from].sent.clear();
    }

    // Delivers in FIFO order until quiet or `limit` messages. Timers never fire.
    std::size_t pump(std::size_t limit, const std::function<bool(ReplicaId, ReplicaId, const Message&)>& keep = {}) {
        for (ReplicaId i = 0; i < config.n; ++i) collect(i);
        std::size_t n = 0;
        while (!queue.empty() && n < limit) {
            auto [from, to, msg] = queue.front();
            queue.pop_front();
            if (keep && !keep(from, to, *msg)) continue;
            replicas[to]->on_message(from, *msg);
            collect(to);
            ++n;
        }
        return n;
    }

    struct InFlight {
        ReplicaId from;
        ReplicaId to;
        MessagePtr msg;
    };

    ProtocolConfig config;
    std::shared_ptr<const crypto::KeyShareSet> keys;
    std::deque<test::ScriptedEnv> envs;
    std::deque<Rejections> observers;
    std::vector<std::unique_ptr<Replica>> replicas;
    std::deque<InFlight> queue;
};

// Leader 0 batches one transaction, keeps it, and proposes round 1.
BlockPtr propose_with_batch(Cluster& c, BatchPtr& batch) {
    c[0].submit(1);
    batch = c[0].make_batch(64);
    c[0].on_message(0, BatchMsg{batch});
    for (ReplicaId i = 0; i < c.config.n; ++i) c[i].start();
    auto proposals = c.envs[0].all<ProposeMsg>();
    REQUIRE(proposals.size() == 1);
    return proposals[0]->block;
}

std::vector<Prefix> votes_of(const test::ScriptedEnv& env) {
    std::vector<Prefix> out;
    for (auto* v : env.all<QcVoteMsg>()) out.push_back(v->prefix);
    return out;
}

}  // namespace

TEST_CASE("a replica holding every batch votes the full prefix at once") {
    Cluster c(Variant::kRaptr);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    CHECK(block->round() == 1);
    CHECK(block->payload().batch_count() == 1);
    c[1].on_message(0, BatchMsg{batch});
    c[1].on_message(0, ProposeMsg{block});
    CHECK(votes_of(c.envs[1]) == std::vector<Prefix>{c.config.sub_blocks});
    CHECK(c[1].last_qc_vote() == Rank{1, c.config.sub_blocks});
}

TEST_CASE("missing data: partial vote on the timer, then the full vote") {
    Cluster c(Variant::kRaptr);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    c[2].on_message(0, ProposeMsg{block});
    CHECK(votes_of(c.envs[2]).empty());
    CHECK(c.envs[2].timers.count({TimerKind::kQcVote, 0}) == 1);
    CHECK(c.envs[2].timers.at({TimerKind::kQcVote, 0}) == c.config.qc_vote_delay());
    c[2].on_timer({TimerKind::kQcVote, 0});
    CHECK(votes_of(c.envs[2]) == std::vector<Prefix>{0});
    c[2].on_timer({TimerKind::kQcVote, 0});
    CHECK(votes_of(c.envs[2]).size() == 1);
    c[2].on_message(0, BatchMsg{batch});
    CHECK(votes_of(c.envs[2]) == std::vector<Prefix>{0, c.config.sub_blocks});
}

TEST_CASE("the all-or-nothing variant waits for the data before voting") {
    Cluster c(Variant::kBabyRaptr);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    c[2].on_message(0, ProposeMsg{block});
    CHECK(c.envs[2].timers.count({TimerKind::kQcVote, 0}) == 0);
    c[2].on_timer({TimerKind::kQcVote, 0});
    CHECK(votes_of(c.envs[2]).empty());
    c[2].on_message(0, BatchMsg{batch});
    CHECK(votes_of(c.envs[2]) == std::vector<Prefix>{c.config.sub_blocks});
}

TEST_CASE("the baseline leader proposes no unproven batches") {
    Cluster c(Variant::kBaselineQs);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    CHECK(block->payload().batch_count() == 0);
}

TEST_CASE("timing out forbids later votes in the round and repeats the same tc-vote") {
    Cluster c(Variant::kRaptr);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    CHECK(c.envs[1].timers.at({TimerKind::kRoundTimeout, 0}) == c.config.round_timeout());
    c[1].on_timer({TimerKind::kRoundTimeout, 0});
    CHECK(c[1].timeout_round() == 1);
    REQUIRE(c.envs[1].all<TcVoteMsg>().size() == 1);
    c[1].on_message(0, BatchMsg{batch});
    c[1].on_message(0, ProposeMsg{block});
    CHECK(votes_of(c.envs[1]).empty());
    c[1].on_timer({TimerKind::kRoundTimeout, 0});
    auto tcs = c.envs[1].taken<TcVoteMsg>();
    REQUIRE(tcs.size() == 2);
    CHECK(tcs[0].msg == tcs[1].msg);
}

TEST_CASE("four honest replicas over a lossless network commit and agree") {
    Cluster c(Variant::kRaptr);
    TxId next = 1;
    for (ReplicaId i = 0; i < c.config.n; ++i) {
        c[i].submit(next++);
        c[i].make_batch(64);
    }
    for (ReplicaId i = 0; i < c.config.n; ++i) c[i].start();
    c.pump(20000);
    for (ReplicaId i = 0; i < c.config.n; ++i) {
        CAPTURE(i);
        CHECK(c[i].round() >= 5);
        CHECK(c[i].qc_committed()->round() >= 3);
        CHECK(c[i].delivered_count() == 4);
        CHECK(c[i].delivered_digest() == c[0].delivered_digest());
    }
}

TEST_CASE("a silent leader is replaced through timeout certificates") {
    Cluster c(Variant::kRaptr);
    for (ReplicaId i = 0; i < c.config.n; ++i) c[i].start();
    for (auto& env : c.envs) env.sent.clear();
    for (ReplicaId i = 1; i < c.config.n; ++i) c[i].on_timer({TimerKind::kRoundTimeout, 0});
    c.pump(5000, [](ReplicaId from, ReplicaId, const Message&) { return from != 0; });
    for (ReplicaId i = 1; i < c.config.n; ++i) {
        CAPTURE(i);
        CHECK(c[i].round() >= 3);
        CHECK(c[i].qc_committed()->round() >= 1);
    }
}

TEST_CASE("forged votes are rejected") {
    Cluster c(Variant::kRaptr);
    BatchPtr batch;
    auto block = propose_with_batch(c, batch);
    const Prefix m = c.config.sub_blocks;
    crypto::Signer three(c.keys, 3);
    QcVoteMsg vote{1, m, block->digest(), three.sign(m, qc_vote_statement(block->digest(), 1, m))};
    c[0].on_message(1, vote);
    c[0].on_message(2, vote);
    QcVoteMsg retagged = vote;
    retagged.prefix = 0;
    c[0].on_message(3, retagged);
    CHECK(c.observers[0].kinds == std::vector<std::string>{"qc-vote", "qc-vote", "qc-vote"});
    c[0].on_message(3, vote);
    CHECK(c.observers[0].kinds.size() == 3);
    CHECK(c[0].qc_high()->is_genesis());
}
