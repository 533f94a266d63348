// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "core/errors.hpp"
#include "core/types.hpp"

namespace raptr::metrics {

class MetricsError : public Error {
public:
    using Error::Error;
};

enum class TxEvent : std::uint8_t { kSubmitted, kBatched, kBatchBroadcast, kIncludable, kProposed, kDelivered };

struct TxRecord {
    TxId id = 0;
    ReplicaId origin = 0;
    bool honest_origin = true;
    SimTime submitted_at = -1;
    SimTime batched_at = -1;
    SimTime batch_broadcast_at = -1;
    SimTime includable_at = -1;
    SimTime first_proposed_at = -1;
    std::vector<SimTime> delivered_at;
    Round committing_round = 0;
};

struct Window {
    SimTime begin = 0;
    SimTime end = 0;

    bool contains(SimTime t) const { return t >= begin && t < end; }
    SimTime length() const { return end - begin; }
};

struct Summary {
    std::size_t count = 0;
    double mean = 0;
    double p25 = 0;
    double p50 = 0;
    double p75 = 0;
    double max = 0;
};

// Linear interpolation between closest ranks. Empty input gives zeros.
Summary summarize(std::vector<double> samples);

struct RunAggregates {
    Summary ordering;        // batch broadcast -> delivered at every honest replica
    Summary dissemination;   // batch broadcast -> first honest proposal
    Summary consensus;       // first honest proposal -> delivered at every honest replica
    Summary block_inclusion; // includable -> first honest proposal
    Summary batch_inclusion; // submitted -> batched
    Summary end_to_end;      // submitted -> delivered at every honest replica
    double throughput_tps = 0;
    std::uint64_t complete = 0;
    std::uint64_t incomplete = 0;
    std::uint64_t rounds = 0;
    std::uint64_t tc_rounds = 0;
    double tc_rate = 0;
    double round_interval_mean = 0;
    double blocks_per_second = 0;
    std::uint64_t committed_blocks = 0;
    std::uint64_t full_prefix_blocks = 0;
    std::map<Prefix, std::uint64_t> prefix_histogram;
    std::uint64_t fetch_requests = 0;
};

struct HopCounts {
    std::size_t samples = 0;
    double dissemination = 0;
    double inclusion = 0;
    double consensus = 0;
    double ordering = 0;
    // Count of transactions per whole-hop consensus latency.
    std::map<std::int64_t, std::uint64_t> consensus_histogram;
    std::map<std::int64_t, std::uint64_t> dissemination_histogram;
};

class MetricsCollector {
public:
    MetricsCollector(std::uint32_t n, std::vector<bool> honest);

    void register_tx(TxId id, ReplicaId origin, SimTime at);
    // Throws MetricsError for an unknown id or an event that precedes its
    // predecessor stage. Repeated includable/proposed events keep the first.
    TxRecord& record_lifecycle_event(TxId id, TxEvent event, SimTime at, ReplicaId replica = kNoReplica,
                                     Round round = 0);
    const TxRecord* find(TxId id) const;
    std::size_t tx_count() const noexcept { return records_.size(); }

    bool complete(const TxRecord& r) const;
    SimTime last_honest_delivery(const TxRecord& r) const;

    void round_entered(Round r, SimTime at);
    void tc_formed(Round r);
    void fetch_request() { ++fetch_requests_; }
    void block_committed(Round round, Prefix prefix, std::uint32_t sub_blocks, SimTime proposed_at);

    RunAggregates aggregate(const Window& w) const;
    HopCounts hop_counts(SimTime delta, const Window& w) const;

private:
    struct BlockStat {
        Round round;
        Prefix prefix;
        bool full;
        SimTime proposed_at;
    };

    std::uint32_t n_;
    std::vector<bool> honest_;
    std::uint32_t honest_count_ = 0;
    std::unordered_map<TxId, TxRecord> records_;
    std::map<Round, SimTime> round_first_entry_;
    std::map<Round, bool> tc_rounds_;
    std::vector<BlockStat> blocks_;
    std::uint64_t fetch_requests_ = 0;
};

}  // namespace raptr::metrics
