// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <sodium.h>

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <unordered_set>
#include <vector>

#include "consensus/env.hpp"
#include "consensus/variant.hpp"
#include "consensus/verifier.hpp"
#include "qs/quorum_store.hpp"

namespace raptr {

class Replica {
public:
    Replica(ReplicaId id, const ProtocolConfig& config, std::shared_ptr<const crypto::KeyShareSet> keys,
            ReplicaEnv& env, ReplicaObserver* observer);
    Replica(const Replica&) = delete;
    Replica& operator=(const Replica&) = delete;

    void start();
    void on_message(ReplicaId from, const Message& msg);
    void on_timer(const TimerKey& key);

    void submit(TxId tx) { mempool_.push_back(tx); }
    // Batches up to batch_capacity pending transactions; nothing if empty.
    BatchPtr make_batch(std::uint32_t tx_bytes);
    // Releases state for rounds every honest replica has committed.
    void collect_garbage(Round committed_everywhere);
    void share_verified_cache(std::shared_ptr<VerifiedSet> cache) { verifier_.share_cache(std::move(cache)); }

    ReplicaId id() const noexcept { return id_; }
    const ProtocolConfig& config() const noexcept { return config_; }
    const VariantPolicy& policy() const noexcept { return policy_; }
    Round round() const noexcept { return r_cur_; }
    Round timeout_round() const noexcept { return r_timeout_; }
    const QcPtr& qc_high() const noexcept { return qc_high_; }
    const QcPtr& qc_committed() const noexcept { return qc_committed_; }
    Rank last_qc_vote() const noexcept { return last_qc_vote_; }
    const EntryReason& entry_reason() const noexcept { return entry_reason_; }
    const BlockStore& blocks() const noexcept { return blocks_; }
    const qs::QuorumStore& store() const noexcept { return store_; }
    BlockPtr proposal(Round r) const;
    std::size_t mempool_size() const noexcept { return mempool_.size(); }
    std::uint64_t delivered_count() const noexcept { return delivered_count_; }
    Digest delivered_digest() const;
    const BlockPrefix& delivered_frontier() const noexcept { return frontier_; }

private:
    struct QcVoteEntry {
        Prefix prefix = 0;
        PartialSignature sig;
    };
    struct QcVoteSet {
        std::map<ReplicaId, QcVoteEntry> votes;
        std::uint32_t full = 0;
        bool full_formed = false;
    };
    struct CertVote {
        QcPtr qc;
        PartialSignature sig;
    };

    void handle(ReplicaId from, const ProposeMsg& m);
    void handle(ReplicaId from, const AdvanceRoundMsg& m);
    void handle(ReplicaId from, const QcVoteMsg& m);
    void handle(ReplicaId from, const CcVoteMsg& m);
    void handle(ReplicaId from, const TcVoteMsg& m);
    void handle(ReplicaId from, const FetchResponseMsg& m);

    void try_advance_round(Round r, const EntryReason& reason);
    void on_new_qc(const QcPtr& qc);
    void qc_vote();
    void commit_qc(const QcPtr& qc);
    void on_round_timeout();
    void fetch_qc_data(const QuorumCertificate& qc);
    bool two_chain_check(const QcPtr& qc);
    void try_deliver();
    BlockPayload build_payload(const EntryReason& reason);

    bool verify_block(const Block& b);
    bool accept_block(const BlockPtr& b);
    void on_block_arrival(const Digest& d);
    void on_batch_arrival(const Digest& d);
    void reject(ReplicaId from, std::string_view what);
    bool is_cc_voted(Round r) const { return r < vote_floor_ || cc_voted_.count(r) != 0; }
    bool qc_less(const QuorumCertificate& a, const QuorumCertificate& b) const;

    ReplicaId id_;
    ProtocolConfig config_;
    VariantPolicy policy_;
    std::shared_ptr<const crypto::KeyShareSet> keys_;
    crypto::Signer signer_;
    ReplicaEnv& env_;
    ReplicaObserver* observer_;
    BlockStore blocks_;
    CertVerifier verifier_;
    qs::QuorumStore store_;

    Round r_cur_ = 0;
    Round r_timeout_ = 0;
    Rank last_qc_vote_;
    QcPtr qc_high_;
    QcPtr qc_committed_;
    EntryReason entry_reason_;
    std::map<Round, BlockPtr> proposals_;
    std::unordered_set<Digest, DigestHash> proposal_missing_;

    Round vote_floor_ = 0;
    std::set<Round> cc_voted_;
    std::map<Round, std::map<Digest, QcVoteSet>> qc_votes_;
    std::map<Round, std::map<ReplicaId, CertVote>> cc_votes_;
    std::map<Round, std::map<ReplicaId, CertVote>> tc_votes_;
    std::shared_ptr<const Message> my_tc_vote_;

    std::vector<QcPtr> pending_chain_qcs_;
    std::unordered_set<Digest, DigestHash> awaited_blocks_;
    std::unordered_set<Digest, DigestHash> awaited_batches_;

    BlockPrefix frontier_;
    Round frontier_round_ = 0;
    std::uint64_t delivered_count_ = 0;
    crypto_hash_sha256_state log_hash_;

    std::deque<TxId> mempool_;
};

}  // namespace raptr
