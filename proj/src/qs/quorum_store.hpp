// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "consensus/env.hpp"
#include "consensus/verifier.hpp"
#include "core/chain.hpp"

namespace raptr::qs {

// Retrieves missing batches and blocks from hinted replicas, rotating to the
// next hint when a request times out.
class Fetcher {
public:
    using HaveFn = std::function<bool(const Digest&, bool block)>;

    Fetcher(ReplicaId self, const ProtocolConfig& config, ReplicaEnv& env, ReplicaObserver* observer,
            HaveFn have);

    void set_have(HaveFn have) { have_ = std::move(have); }
    // Hints are tried in order, most likely holders first.
    void request(const Digest& d, bool block, std::vector<ReplicaId> hints);
    void on_timer(std::uint64_t id);
    void arrived(const Digest& d) { outstanding_.erase(d); }
    bool outstanding(const Digest& d) const { return outstanding_.count(d) != 0; }
    std::size_t outstanding_count() const noexcept { return outstanding_.size(); }
    std::uint64_t requests_sent() const noexcept { return requests_sent_; }

private:
    struct Item {
        bool block = false;
        std::vector<ReplicaId> hints;
        std::size_t next = 0;
        std::uint32_t attempts = 0;
        // Only the latest dispatch's timer retries the item.
        std::uint64_t timer = 0;
    };

    void dispatch(const std::vector<Digest>& digests);

    ReplicaId self_;
    const ProtocolConfig& config_;
    ReplicaEnv& env_;
    ReplicaObserver* observer_;
    HaveFn have_;
    std::unordered_map<Digest, Item, DigestHash> outstanding_;
    std::map<std::uint64_t, std::vector<Digest>> timers_;
    std::uint64_t next_timer_ = 1;
    std::uint64_t requests_sent_ = 0;
};

class QuorumStore {
public:
    QuorumStore(ReplicaId self, const ProtocolConfig& config, const VariantPolicy& policy,
                const crypto::Signer& signer, CertVerifier& verifier, ReplicaEnv& env, ReplicaObserver* observer);

    // aBcast: store as own batch and multicast it.
    BatchPtr broadcast(std::vector<TxId> txs, std::uint32_t tx_bytes);

    // Returns true if the batch content is new here.
    bool on_batch(ReplicaId from, const BatchPtr& batch);
    void on_poa_vote(ReplicaId from, const PoaVoteMsg& vote);
    bool on_poa(const PoaPtr& poa);
    // Content obtained through a fetch; no PoA vote is sent for it.
    bool on_fetched_batch(const BatchPtr& batch);
    // Learn the PoAs of a block and fetch what it references.
    void on_new_block(const Block& block, ReplicaId leader);
    void on_fetch_request(ReplicaId from, const FetchRequestMsg& req, const BlockStore& blocks);

    // Payload for a new block. `excluded` are batches already in the chain
    // being extended.
    BlockPayload get_payload(const std::unordered_set<Digest, DigestHash>& excluded, bool optimistic) const;

    bool has_batch(const Digest& d) const { return batches_.count(d) != 0; }
    BatchPtr batch(const Digest& d) const;
    PoaPtr poa(const Digest& d) const;
    bool is_equivocator(ReplicaId r) const { return equivocators_.count(r) != 0; }

    void mark_delivered(const MessageRef& m);
    bool slot_delivered(ReplicaId author, std::uint64_t sn) const {
        return delivered_slots_.count({author, sn}) != 0;
    }
    // Drops content of batches delivered in blocks below `round`.
    void prune(Round round);
    void note_delivery_round(const Digest& d, Round round) { delivered_round_[d] = round; }

    Fetcher& fetcher() noexcept { return fetcher_; }
    const Fetcher& fetcher() const noexcept { return fetcher_; }
    std::size_t batch_count() const noexcept { return batches_.size(); }
    std::size_t candidate_count() const noexcept { return candidates_.size(); }
    std::uint64_t next_sn() const noexcept { return next_sn_; }

private:
    struct Candidate {
        BatchInfo info;
        bool have_content = false;
        PoaPtr poa;
    };
    using SlotKey = std::tuple<ReplicaId, std::uint64_t, Digest>;

    Candidate* candidate_for(const BatchInfo& info);
    void store(const BatchPtr& batch);

    ReplicaId self_;
    const ProtocolConfig& config_;
    const VariantPolicy& policy_;
    const crypto::Signer& signer_;
    CertVerifier& verifier_;
    ReplicaEnv& env_;
    ReplicaObserver* observer_;
    Fetcher fetcher_;

    std::uint64_t next_sn_ = 1;
    std::unordered_map<Digest, BatchPtr, DigestHash> batches_;
    std::map<std::pair<ReplicaId, std::uint64_t>, Digest> slots_;
    std::set<ReplicaId> equivocators_;
    std::map<std::uint64_t, BatchPtr> my_batches_;
    std::map<std::uint64_t, std::map<ReplicaId, PartialSignature>> poa_votes_;
    std::unordered_map<Digest, PoaPtr, DigestHash> poas_;
    std::map<SlotKey, Candidate> candidates_;
    std::set<std::pair<ReplicaId, std::uint64_t>> delivered_slots_;
    std::unordered_map<Digest, Round, DigestHash> delivered_round_;
};

}  // namespace raptr::qs
