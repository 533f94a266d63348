// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/certificates.hpp"

#include <algorithm>
#include <functional>

#include "core/errors.hpp"

namespace raptr {

namespace {

template <class V>
void sort_unique_by_replica(std::vector<V>& votes, const char* what) {
    std::sort(votes.begin(), votes.end(),
              [](const V& a, const V& b) { return a.replica < b.replica; });
    for (std::size_t i = 1; i < votes.size(); ++i)
        if (votes[i].replica == votes[i - 1].replica)
            throw MalformedCertificate(std::string(what) + ": duplicate voter " +
                                       std::to_string(votes[i].replica));
}

void encode_votes(Encoder& e, const std::vector<VotePrefix>& votes) {
    e.u32(static_cast<std::uint32_t>(votes.size()));
    for (const auto& v : votes) e.u32(v.replica).u32(v.prefix);
}

std::vector<VotePrefix> decode_votes(Decoder& d) {
    std::vector<VotePrefix> votes(d.count(8));
    for (std::size_t i = 0; i < votes.size(); ++i) {
        votes[i].replica = d.u32();
        votes[i].prefix = d.u32();
        if (i > 0 && votes[i].replica <= votes[i - 1].replica) throw DecodeError("votes out of canonical order");
    }
    return votes;
}

}  // namespace

Prefix qc_certified_prefix(std::span<const VotePrefix> votes, std::uint32_t availability) {
    if (availability == 0 || votes.size() < availability)
        throw MalformedCertificate("fewer votes than the availability threshold");
    std::vector<Prefix> prefixes;
    prefixes.reserve(votes.size());
    for (const auto& v : votes) prefixes.push_back(v.prefix);
    auto nth = prefixes.begin() + (availability - 1);
    std::nth_element(prefixes.begin(), nth, prefixes.end(), std::greater<>());
    return *nth;
}

QcPtr QuorumCertificate::make(Round round, const Digest& block, std::vector<VotePrefix> votes,
                              AggregateSignature signature, std::uint32_t availability) {
    sort_unique_by_replica(votes, "qc");
    auto qc = std::shared_ptr<QuorumCertificate>(new QuorumCertificate());
    qc->prefix_ = qc_certified_prefix(votes, availability);
    qc->round_ = round;
    qc->block_ = block;
    qc->votes_ = std::move(votes);
    qc->signature_ = std::move(signature);
    qc->seal();
    return qc;
}

QcPtr QuorumCertificate::genesis(const Digest& genesis_block) {
    auto qc = std::shared_ptr<QuorumCertificate>(new QuorumCertificate());
    qc->block_ = genesis_block;
    qc->genesis_ = true;
    qc->seal();
    return qc;
}

void QuorumCertificate::seal() {
    Encoder e;
    encode(e);
    id_ = e.hash();
}

void QuorumCertificate::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("qc").boolean(genesis_).u64(round_).digest(block_);
        encode_votes(b, votes_);
        b.bytes(signature_.bytes);
    });
}

QcPtr QuorumCertificate::decode(Decoder& outer, std::uint32_t availability) {
    auto d = outer.nested();
    if (d.str() != "qc") throw DecodeError("expected qc");
    const bool genesis = d.boolean();
    const Round round = d.u64();
    const Digest block = d.digest();
    auto votes = decode_votes(d);
    AggregateSignature sig{d.bytes()};
    d.expect_done();
    if (genesis) {
        if (round != 0 || !votes.empty() || !sig.bytes.empty()) throw DecodeError("malformed genesis qc");
        return QuorumCertificate::genesis(block);
    }
    try {
        return make(round, block, std::move(votes), std::move(sig), availability);
    } catch (const MalformedCertificate& e) {
        throw DecodeError(e.what());
    }
}

CcPtr CommitCertificate::make(Round round, const Digest& block, std::vector<VotePrefix> votes,
                              AggregateSignature signature) {
    if (votes.empty()) throw MalformedCertificate("cc: no votes");
    sort_unique_by_replica(votes, "cc");
    auto cc = std::shared_ptr<CommitCertificate>(new CommitCertificate());
    cc->round_ = round;
    cc->block_ = block;
    cc->commit_prefix_ = votes.front().prefix;
    cc->extend_prefix_ = votes.front().prefix;
    for (const auto& v : votes) {
        cc->commit_prefix_ = std::min(cc->commit_prefix_, v.prefix);
        cc->extend_prefix_ = std::max(cc->extend_prefix_, v.prefix);
    }
    cc->votes_ = std::move(votes);
    cc->signature_ = std::move(signature);
    Encoder e;
    cc->encode(e);
    cc->id_ = e.hash();
    return cc;
}

void CommitCertificate::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("cc").u64(round_).digest(block_);
        encode_votes(b, votes_);
        b.bytes(signature_.bytes);
    });
}

CcPtr CommitCertificate::decode(Decoder& outer) {
    auto d = outer.nested();
    if (d.str() != "cc") throw DecodeError("expected cc");
    const Round round = d.u64();
    const Digest block = d.digest();
    auto votes = decode_votes(d);
    AggregateSignature sig{d.bytes()};
    d.expect_done();
    try {
        return make(round, block, std::move(votes), std::move(sig));
    } catch (const MalformedCertificate& e) {
        throw DecodeError(e.what());
    }
}

TcPtr TimeoutCertificate::make(Round round, std::vector<VoteRank> votes, AggregateSignature signature) {
    if (votes.empty()) throw MalformedCertificate("tc: no votes");
    sort_unique_by_replica(votes, "tc");
    auto tc = std::shared_ptr<TimeoutCertificate>(new TimeoutCertificate());
    tc->round_ = round;
    for (const auto& v : votes) tc->extend_rank_ = std::max(tc->extend_rank_, v.rank);
    tc->votes_ = std::move(votes);
    tc->signature_ = std::move(signature);
    Encoder e;
    tc->encode(e);
    tc->id_ = e.hash();
    return tc;
}

void TimeoutCertificate::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("tc").u64(round_);
        b.u32(static_cast<std::uint32_t>(votes_.size()));
        for (const auto& v : votes_) b.u32(v.replica).u64(v.rank.round).u32(v.rank.prefix);
        b.bytes(signature_.bytes);
    });
}

TcPtr TimeoutCertificate::decode(Decoder& outer) {
    auto d = outer.nested();
    if (d.str() != "tc") throw DecodeError("expected tc");
    const Round round = d.u64();
    std::vector<VoteRank> votes(d.count(16));
    for (std::size_t i = 0; i < votes.size(); ++i) {
        votes[i].replica = d.u32();
        votes[i].rank.round = d.u64();
        votes[i].rank.prefix = d.u32();
        if (i > 0 && votes[i].replica <= votes[i - 1].replica) throw DecodeError("votes out of canonical order");
    }
    AggregateSignature sig{d.bytes()};
    d.expect_done();
    try {
        return make(round, std::move(votes), std::move(sig));
    } catch (const MalformedCertificate& e) {
        throw DecodeError(e.what());
    }
}

EntryReason EntryReason::full_qc(QcPtr qc) {
    return EntryReason{ReasonKind::kFullQc, std::move(qc), nullptr, nullptr};
}

EntryReason EntryReason::commit(CcPtr cc, QcPtr qc) {
    return EntryReason{ReasonKind::kCommit, std::move(qc), std::move(cc), nullptr};
}

EntryReason EntryReason::timeout(TcPtr tc, QcPtr qc) {
    return EntryReason{ReasonKind::kTimeout, std::move(qc), nullptr, std::move(tc)};
}

Round EntryReason::round() const {
    if (kind == ReasonKind::kTimeout) return tc->round() + 1;
    return qc->round() + 1;
}

void EntryReason::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("reason").u8(static_cast<std::uint8_t>(kind));
        qc->encode(b);
        if (kind == ReasonKind::kCommit) cc->encode(b);
        if (kind == ReasonKind::kTimeout) tc->encode(b);
    });
}

EntryReason EntryReason::decode(Decoder& outer, std::uint32_t availability) {
    auto d = outer.nested();
    if (d.str() != "reason") throw DecodeError("expected entry reason");
    const auto kind = d.u8();
    EntryReason r;
    switch (kind) {
        case 0:
            r = full_qc(QuorumCertificate::decode(d, availability));
            break;
        case 1: {
            auto qc = QuorumCertificate::decode(d, availability);
            r = commit(CommitCertificate::decode(d), std::move(qc));
            break;
        }
        case 2: {
            auto qc = QuorumCertificate::decode(d, availability);
            r = timeout(TimeoutCertificate::decode(d), std::move(qc));
            break;
        }
        default: throw DecodeError("unknown entry reason kind");
    }
    d.expect_done();
    return r;
}

bool entry_reason_consistent(const EntryReason& reason, std::uint32_t sub_blocks, bool rank_by_round_only) {
    if (!reason.qc) return false;
    const auto& qc = *reason.qc;
    switch (reason.kind) {
        case ReasonKind::kFullQc:
            return qc.is_genesis() || qc.prefix() == sub_blocks;
        case ReasonKind::kCommit:
            return reason.cc && reason.cc->round() == qc.round() &&
                   qc.prefix() >= reason.cc->extend_prefix();
        case ReasonKind::kTimeout: {
            if (!reason.tc || qc.round() > reason.tc->round()) return false;
            if (rank_by_round_only) return qc.round() >= reason.tc->extend_rank().round;
            return qc.rank() >= reason.tc->extend_rank();
        }
    }
    return false;
}

}  // namespace raptr
