// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace raptr {

using ReplicaId = std::uint32_t;
using Round = std::uint64_t;
using Prefix = std::uint32_t;
using SimTime = std::int64_t;
using TxId = std::uint64_t;

inline constexpr ReplicaId kNoReplica = ~ReplicaId{0};

struct Rank {
    Round round = 0;
    Prefix prefix = 0;

    friend auto operator<=>(const Rank&, const Rank&) = default;
};

std::string to_string(const Rank& r);

enum class Variant : std::uint8_t { kRaptr, kBabyRaptr, kBaselineQs };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct ProtocolConfig {
    std::uint32_t n = 4;
    std::uint32_t f = 1;
    std::uint32_t quorum_size = 3;
    // Number of full-prefix votes a QC needs to certify a prefix (S).
    std::uint32_t availability = 2;
    // Sub-blocks per block (M).
    std::uint32_t sub_blocks = 4;
    SimTime delta = 1000;
    double epsilon = 0.1;
    SimTime min_batch_age = 0;
    SimTime batch_interval = 1000;
    std::uint32_t batch_capacity = 450;
    Variant variant = Variant::kRaptr;
    bool two_chain_commit = true;

    static ProtocolConfig with_faults(std::uint32_t f);

    void validate() const;
    SimTime qc_vote_delay() const;
    SimTime round_timeout() const;
    ReplicaId leader(Round r) const { return static_cast<ReplicaId>((r - 1) % n); }
};

struct PartialSignature {
    ReplicaId signer = 0;
    std::uint32_t tag = 0;
    std::vector<std::uint8_t> bytes;

    friend bool operator==(const PartialSignature&, const PartialSignature&) = default;
};

struct AggregateSignature {
    std::vector<std::uint8_t> bytes;

    friend bool operator==(const AggregateSignature&, const AggregateSignature&) = default;
};

}  // namespace raptr
