// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/messages.hpp"

#include "core/codec.hpp"

namespace raptr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::size_t kSigBytes = 16;
constexpr std::size_t kQcBytes = 48;
constexpr std::size_t kVoteBytes = 8;

std::size_t qc_size(const QuorumCertificate& qc) { return kQcBytes + qc.votes().size() * kVoteBytes + kSigBytes; }

std::size_t reason_size(const EntryReason& r) {
    std::size_t s = 8 + qc_size(*r.qc);
    if (r.cc) s += 48 + r.cc->votes().size() * kVoteBytes + kSigBytes;
    if (r.tc) s += 16 + r.tc->votes().size() * 16 + kSigBytes;
    return s;
}

std::size_t block_size(const Block& b) {
    std::size_t s = 48 + (b.is_genesis() ? 0 : reason_size(b.reason()));
    s += b.payload().poas.size() * (64 + kSigBytes);
    for (const auto& sub : b.payload().sub_blocks) s += 4 + sub.size() * 56;
    return s;
}

std::size_t batch_size(const Batch& b) { return 64 + b.txs().size() * 8 + b.payload_bytes(); }

}  // namespace

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::kConsensus: return "consensus";
        case Channel::kData: return "data";
        case Channel::kQsControl: return "qs-control";
    }
    return "unknown";
}

Channel channel_of(const Message& m) {
    return std::visit(Overloaded{
                          [](const BatchMsg&) { return Channel::kData; },
                          [](const FetchResponseMsg&) { return Channel::kData; },
                          [](const PoaVoteMsg&) { return Channel::kQsControl; },
                          [](const PoaMsg&) { return Channel::kQsControl; },
                          [](const FetchRequestMsg&) { return Channel::kQsControl; },
                          [](const auto&) { return Channel::kConsensus; },
                      },
                      m);
}

std::string_view kind_name(const Message& m) {
    static constexpr std::string_view kNames[] = {"Batch",   "PoAVote",      "PoA",    "FetchRequest",
                                                  "FetchResponse", "Propose", "AdvanceRound", "QCVote",
                                                  "CCVote",  "TCVote"};
    return kNames[m.index()];
}

std::string describe(const Message& m) {
    return std::visit(
        Overloaded{
            [](const BatchMsg& x) {
                return "Batch author=" + std::to_string(x.batch->author()) + " sn=" + std::to_string(x.batch->sn()) +
                       " d=" + x.batch->digest().short_hex();
            },
            [](const PoaVoteMsg& x) { return "PoAVote sn=" + std::to_string(x.sn); },
            [](const PoaMsg& x) { return "PoA d=" + x.poa->batch().digest.short_hex(); },
            [](const FetchRequestMsg& x) {
                return "FetchRequest batches=" + std::to_string(x.batches.size()) +
                       " blocks=" + std::to_string(x.blocks.size());
            },
            [](const FetchResponseMsg& x) {
                return "FetchResponse batches=" + std::to_string(x.batches.size()) +
                       " blocks=" + std::to_string(x.blocks.size());
            },
            [](const ProposeMsg& x) {
                return "Propose r=" + std::to_string(x.block->round()) + " b=" + x.block->digest().short_hex() +
                       " parent=" + to_string(x.block->qc_parent()->rank());
            },
            [](const AdvanceRoundMsg& x) { return "AdvanceRound r=" + std::to_string(x.reason.round()); },
            [](const QcVoteMsg& x) {
                return "QCVote r=" + std::to_string(x.round) + " p=" + std::to_string(x.prefix) +
                       " b=" + x.block.short_hex();
            },
            [](const CcVoteMsg& x) {
                return "CCVote qc=" + to_string(x.qc->rank()) + " b=" + x.qc->block().short_hex();
            },
            [](const TcVoteMsg& x) {
                return "TCVote r=" + std::to_string(x.round) + " qc=" + to_string(x.qc->rank());
            },
        },
        m);
}

std::size_t wire_size(const Message& m) {
    return std::visit(Overloaded{
                          [](const BatchMsg& x) { return batch_size(*x.batch); },
                          [](const PoaVoteMsg&) { return std::size_t{48 + kSigBytes}; },
                          [](const PoaMsg&) { return std::size_t{64 + 8 * 4 + kSigBytes}; },
                          [](const FetchRequestMsg& x) { return 16 + 32 * (x.batches.size() + x.blocks.size()); },
                          [](const FetchResponseMsg& x) {
                              std::size_t s = 16;
                              for (const auto& b : x.batches) s += batch_size(*b);
                              for (const auto& b : x.blocks) s += block_size(*b);
                              return s;
                          },
                          [](const ProposeMsg& x) { return block_size(*x.block); },
                          [](const AdvanceRoundMsg& x) { return reason_size(x.reason); },
                          [](const QcVoteMsg&) { return std::size_t{48 + kSigBytes}; },
                          [](const CcVoteMsg& x) { return qc_size(*x.qc) + kSigBytes; },
                          [](const TcVoteMsg& x) { return 8 + reason_size(x.reason) + qc_size(*x.qc) + kSigBytes; },
                      },
                      m);
}

std::vector<std::uint8_t> qc_vote_statement(const Digest& block, Round round, Prefix prefix) {
    Encoder e;
    e.str("qc-vote").digest(block).u64(round).u32(prefix);
    return std::move(e).take();
}

std::vector<std::uint8_t> cc_vote_statement(const Digest& block, Round round, Prefix prefix) {
    Encoder e;
    e.str("cc-vote").digest(block).u64(round).u32(prefix);
    return std::move(e).take();
}

std::vector<std::uint8_t> tc_vote_statement(Round round, Round qc_round, Prefix qc_prefix) {
    Encoder e;
    e.str("tc-vote").u64(round).u64(qc_round).u32(qc_prefix);
    return std::move(e).take();
}

std::vector<std::uint8_t> poa_vote_statement(const Digest& batch, std::uint64_t sn, ReplicaId author) {
    Encoder e;
    e.str("poa-vote").digest(batch).u64(sn).u32(author);
    return std::move(e).take();
}

}  // namespace raptr
