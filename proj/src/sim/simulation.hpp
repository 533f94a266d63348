// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

#include "consensus/replica.hpp"
#include "metrics/metrics.hpp"
#include "sim/adversary.hpp"
#include "sim/network.hpp"
#include "sim/observer.hpp"

namespace raptr::sim {

enum class Verdict : std::uint8_t { kPass, kSafetyViolation, kLivenessViolation };

std::string_view to_string(Verdict v);

struct ReplicaSummary {
    ReplicaId id = 0;
    bool honest = true;
    bool crashed = false;
    Round round = 0;
    Rank committed;
    std::uint64_t delivered = 0;
    std::string delivered_digest;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    Variant variant = Variant::kRaptr;
    Verdict verdict = Verdict::kPass;
    std::vector<Violation> violations;
    std::uint64_t events = 0;
    SimTime end_time = 0;
    Round min_round = 0;
    Round max_round = 0;
    std::vector<ReplicaSummary> replicas;
    metrics::RunAggregates metrics;
    std::optional<metrics::HopCounts> hops;
    std::array<ChannelStats, kChannelCount> channels{};
    std::uint64_t delta_violations = 0;
    std::uint64_t rejected = 0;
    std::uint64_t unchecked_containment = 0;
    std::string counterexample;

    std::string to_json() const;
};

// Per-round timing of honest replicas, for liveness-bound checks.
struct RoundTiming {
    SimTime first_entry = -1;
    ReplicaId leader = 0;
    bool has_block = false;
    Digest block;
    std::vector<SimTime> committed_at;
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& scenario);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // Runs to the horizon. Stops early at the first safety violation when
    // `stop_on_violation` is set.
    RunReport run(bool stop_on_violation = true);

    // Keeps the last `limit` processed events as text.
    void enable_trace(std::size_t limit);
    const std::deque<std::string>& trace() const noexcept { return trace_; }

    SimTime now() const noexcept { return now_; }
    const ScenarioConfig& scenario() const noexcept { return scenario_; }
    Replica& replica(ReplicaId id);
    bool honest(ReplicaId id) const { return honest_[id]; }
    Observer& observer() noexcept { return *observer_; }
    const metrics::MetricsCollector& metrics() const noexcept { return *metrics_; }
    const std::map<Round, RoundTiming>& round_timing() const noexcept { return timing_; }

    // Test hook: executes one event; false once the queue is empty.
    bool step();

private:
    struct Node;
    class NodeEnv;
    class NodeHooks;
    class NodeAdversaryContext;

    enum class EventKind : std::uint8_t { kStart, kDeliver, kTimer, kBatchTick, kClientTx };
    struct Event {
        SimTime time = 0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::kStart;
        ReplicaId target = 0;
        ReplicaId from = 0;
        MessagePtr msg;
        TimerKey timer;
        std::uint64_t generation = 0;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void push(Event e);
    void process(const Event& e);
    void outgoing(Node& node, std::vector<ReplicaId> to, const MessagePtr& msg);
    void transmit(ReplicaId from, ReplicaId to, const MessagePtr& msg);
    bool crashed(const Node& node) const;
    bool adversarial(const Node& node) const;
    void note_trace(const Event& e);
    void maybe_collect_garbage();
    bool horizon_reached() const;
    RunReport make_report();

    const ScenarioConfig scenario_;
    std::vector<bool> honest_;
    Network network_;
    std::unique_ptr<Observer> observer_;
    std::unique_ptr<metrics::MetricsCollector> metrics_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    SimTime now_ = 0;
    std::uint64_t events_ = 0;
    TxId next_tx_ = 1;
    std::uint64_t rejected_ = 0;
    Round gc_round_ = 0;

    std::unordered_map<Digest, BatchPtr, DigestHash> batches_;
    std::unordered_set<Digest, DigestHash> includable_seen_;
    std::unordered_set<Digest, DigestHash> proposed_seen_;
    std::map<Round, RoundTiming> timing_;

    bool tracing_ = false;
    std::size_t trace_limit_ = 0;
    std::deque<std::string> trace_;
};

// Runs a scenario; on a safety violation re-runs the seed with tracing and
// attaches the counterexample.
RunReport run_scenario(const ScenarioConfig& scenario);

}  // namespace raptr::sim
