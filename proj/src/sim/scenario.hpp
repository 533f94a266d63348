// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "consensus/messages.hpp"
#include "core/errors.hpp"
#include "core/types.hpp"
#include "crypto/nias.hpp"

namespace raptr::sim {

class ScenarioError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

inline constexpr SimTime kForever = std::numeric_limits<SimTime>::max();

struct DelaySpec {
    enum class Kind : std::uint8_t { kFixed, kUniform, kRegions };
    Kind kind = Kind::kFixed;
    SimTime value = 1000;
    SimTime lo = 0;
    SimTime hi = 0;
    std::vector<std::uint32_t> regions;
    std::vector<std::vector<SimTime>> matrix;
    SimTime jitter = 0;

    SimTime max_delay() const;
};

struct ChannelSpec {
    bool has_delay = false;
    DelaySpec delay;
    // Link serialization rate; 0 means unlimited.
    double bytes_per_us = 0;
};

struct NetworkSpec {
    DelaySpec delay;
    std::array<ChannelSpec, kChannelCount> channels{};
    SimTime gst = 0;
    SimTime pre_gst_max_extra = 0;
    double pre_gst_drop = 0;
    SimTime processing_cost = 0;
    std::vector<double> clock_skew;
    // Round-trip every message through the wire codec.
    bool serialize_wire = false;

    const DelaySpec& delay_for(Channel c) const;
    bool all_fixed() const;
};

enum class FaultKind : std::uint8_t { kCrash, kByzantine, kDrop, kPartition };
enum class Behavior : std::uint8_t {
    kSilent,
    kEquivocatingProposer,
    kSelectiveBatchSender,
    kVoteWithholder,
    kStaleVoteReplayer,
};

std::string_view to_string(Behavior b);

struct FaultSpec {
    FaultKind kind = FaultKind::kCrash;
    ReplicaId replica = 0;
    Behavior behavior = Behavior::kSilent;
    SimTime at = 0;
    // Drop windows: affected senders. Partition: the groups.
    std::vector<ReplicaId> replicas;
    std::vector<std::vector<ReplicaId>> groups;
    // Selective batch sender: recipients of batches; empty means upcoming leaders.
    std::vector<ReplicaId> targets;
    double rate = 0;
    SimTime from = 0;
    SimTime until = kForever;
};

struct LoadSpec {
    // Client transactions per second at each submitting replica (1 time unit = 1us).
    double tx_per_second = 1000;
    std::uint32_t tx_bytes = 256;
    SimTime batch_jitter = 0;
    std::vector<ReplicaId> submitters;
    SimTime stop = kForever;
};

struct HorizonSpec {
    SimTime time = 0;
    Round rounds = 0;
};

struct CheckSpec {
    bool liveness = true;
    SimTime liveness_slack = 0;
    // Fraction of the run trimmed at each end for steady-state metrics.
    double metrics_trim = 0.1;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ProtocolConfig protocol;
    NetworkSpec network;
    std::vector<FaultSpec> faults;
    LoadSpec load;
    HorizonSpec horizon;
    std::uint64_t seed = 1;
    CheckSpec checks;
    crypto::SchemeKind crypto = crypto::SchemeKind::kKeyedHash;
    bool hop_count_mode = false;
    std::size_t trace_limit = 0;

    static ScenarioConfig parse(std::string_view text);
    static ScenarioConfig load_file(const std::string& path);
    std::string serialize() const;
    // Throws ScenarioError naming the violated constraint.
    void validate() const;

    std::vector<bool> honest_mask() const;
    SimTime effective_liveness_slack() const;
};

}  // namespace raptr::sim
