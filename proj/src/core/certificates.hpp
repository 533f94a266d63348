// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "core/codec.hpp"
#include "core/digest.hpp"
#include "core/types.hpp"

namespace raptr {

struct VotePrefix {
    ReplicaId replica = 0;
    Prefix prefix = 0;

    friend auto operator<=>(const VotePrefix&, const VotePrefix&) = default;
};

struct VoteRank {
    ReplicaId replica = 0;
    Rank rank;

    friend auto operator<=>(const VoteRank&, const VoteRank&) = default;
};

// The S'th largest prefix among the votes. Throws MalformedCertificate when
// fewer than S votes are given.
Prefix qc_certified_prefix(std::span<const VotePrefix> votes, std::uint32_t availability);

class QuorumCertificate;
class CommitCertificate;
class TimeoutCertificate;
using QcPtr = std::shared_ptr<const QuorumCertificate>;
using CcPtr = std::shared_ptr<const CommitCertificate>;
using TcPtr = std::shared_ptr<const TimeoutCertificate>;

class QuorumCertificate {
public:
    static QcPtr make(Round round, const Digest& block, std::vector<VotePrefix> votes,
                      AggregateSignature signature, std::uint32_t availability);
    static QcPtr genesis(const Digest& genesis_block);
    static QcPtr decode(Decoder& d, std::uint32_t availability);

    Round round() const noexcept { return round_; }
    const Digest& block() const noexcept { return block_; }
    const std::vector<VotePrefix>& votes() const noexcept { return votes_; }
    const AggregateSignature& signature() const noexcept { return signature_; }
    Prefix prefix() const noexcept { return prefix_; }
    Rank rank() const noexcept { return {round_, prefix_}; }
    bool is_genesis() const noexcept { return genesis_; }
    // Digest of the canonical encoding; identifies this exact certificate.
    const Digest& id() const noexcept { return id_; }

    void encode(Encoder& e) const;

private:
    QuorumCertificate() = default;
    void seal();

    Round round_ = 0;
    Digest block_;
    std::vector<VotePrefix> votes_;
    AggregateSignature signature_;
    Prefix prefix_ = 0;
    bool genesis_ = false;
    Digest id_;
};

class CommitCertificate {
public:
    static CcPtr make(Round round, const Digest& block, std::vector<VotePrefix> votes,
                      AggregateSignature signature);
    static CcPtr decode(Decoder& d);

    Round round() const noexcept { return round_; }
    const Digest& block() const noexcept { return block_; }
    const std::vector<VotePrefix>& votes() const noexcept { return votes_; }
    const AggregateSignature& signature() const noexcept { return signature_; }
    Prefix commit_prefix() const noexcept { return commit_prefix_; }
    Prefix extend_prefix() const noexcept { return extend_prefix_; }
    const Digest& id() const noexcept { return id_; }

    void encode(Encoder& e) const;

private:
    CommitCertificate() = default;

    Round round_ = 0;
    Digest block_;
    std::vector<VotePrefix> votes_;
    AggregateSignature signature_;
    Prefix commit_prefix_ = 0;
    Prefix extend_prefix_ = 0;
    Digest id_;
};

class TimeoutCertificate {
public:
    static TcPtr make(Round round, std::vector<VoteRank> votes, AggregateSignature signature);
    static TcPtr decode(Decoder& d);

    Round round() const noexcept { return round_; }
    const std::vector<VoteRank>& votes() const noexcept { return votes_; }
    const AggregateSignature& signature() const noexcept { return signature_; }
    const Rank& extend_rank() const noexcept { return extend_rank_; }
    const Digest& id() const noexcept { return id_; }

    void encode(Encoder& e) const;

private:
    TimeoutCertificate() = default;

    Round round_ = 0;
    std::vector<VoteRank> votes_;
    AggregateSignature signature_;
    Rank extend_rank_;
    Digest id_;
};

enum class ReasonKind : std::uint8_t { kFullQc = 0, kCommit = 1, kTimeout = 2 };

struct EntryReason {
    ReasonKind kind = ReasonKind::kFullQc;
    QcPtr qc;
    CcPtr cc;
    TcPtr tc;

    static EntryReason full_qc(QcPtr qc);
    static EntryReason commit(CcPtr cc, QcPtr qc);
    static EntryReason timeout(TcPtr tc, QcPtr qc);
    static EntryReason decode(Decoder& d, std::uint32_t availability);

    Round round() const;
    void encode(Encoder& e) const;
};

// Structural checks between the certificates of an entry reason. Signature
// validity is checked separately.
bool entry_reason_consistent(const EntryReason& reason, std::uint32_t sub_blocks, bool rank_by_round_only);

}  // namespace raptr
