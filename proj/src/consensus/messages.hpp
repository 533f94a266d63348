// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/batch.hpp"
#include "core/block.hpp"
#include "core/certificates.hpp"

namespace raptr {

enum class Channel : std::uint8_t { kConsensus = 0, kData = 1, kQsControl = 2 };
inline constexpr std::size_t kChannelCount = 3;

std::string_view to_string(Channel c);

struct BatchMsg {
    BatchPtr batch;
};

struct PoaVoteMsg {
    std::uint64_t sn = 0;
    Digest digest;
    PartialSignature sig;
};

struct PoaMsg {
    PoaPtr poa;
};

struct FetchRequestMsg {
    std::vector<Digest> batches;
    std::vector<Digest> blocks;
};

struct FetchResponseMsg {
    std::vector<BatchPtr> batches;
    std::vector<BlockPtr> blocks;
};

struct ProposeMsg {
    BlockPtr block;
};

struct AdvanceRoundMsg {
    EntryReason reason;
};

struct QcVoteMsg {
    Round round = 0;
    Prefix prefix = 0;
    Digest block;
    PartialSignature sig;
};

struct CcVoteMsg {
    QcPtr qc;
    PartialSignature sig;
};

struct TcVoteMsg {
    Round round = 0;
    EntryReason reason;
    QcPtr qc;
    PartialSignature sig;
};

using Message = std::variant<BatchMsg, PoaVoteMsg, PoaMsg, FetchRequestMsg, FetchResponseMsg, ProposeMsg,
                             AdvanceRoundMsg, QcVoteMsg, CcVoteMsg, TcVoteMsg>;
using MessagePtr = std::shared_ptr<const Message>;

Channel channel_of(const Message& m);
std::string_view kind_name(const Message& m);
std::string describe(const Message& m);
// Simulated wire size in bytes, including transaction payload bytes that the
// canonical encoding represents only by id.
std::size_t wire_size(const Message& m);

// Signed statements. Each is domain separated.
std::vector<std::uint8_t> qc_vote_statement(const Digest& block, Round round, Prefix prefix);
std::vector<std::uint8_t> cc_vote_statement(const Digest& block, Round round, Prefix prefix);
std::vector<std::uint8_t> tc_vote_statement(Round round, Round qc_round, Prefix qc_prefix);
std::vector<std::uint8_t> poa_vote_statement(const Digest& batch, std::uint64_t sn, ReplicaId author);

}  // namespace raptr
