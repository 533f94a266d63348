// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "consensus/env.hpp"
#include "core/chain.hpp"

namespace raptr::sim {

enum class ViolationKind : std::uint8_t {
    kTotalOrder,
    kDuplication,
    kPrefixContainment,
    kQcUniqueness,
    kVoteDiscipline,
    kMonotonicity,
    kValidity,
    kTotality,
};

std::string_view to_string(ViolationKind k);
bool is_safety(ViolationKind k);

struct Violation {
    ViolationKind kind;
    SimTime time = 0;
    ReplicaId replica = 0;
    std::string detail;
    std::vector<std::string> artifacts;
};

// Checks the honest replicas' externally visible behaviour as the run
// proceeds. All hooks take the acting replica; callers only report honest
// replicas.
class Observer {
public:
    Observer(const ProtocolConfig& config, std::vector<bool> honest, BlockPtr genesis);

    void set_now(SimTime t) { now_ = t; }

    // Every block that reaches the network, honest or not.
    void register_block(const BlockPtr& b);
    const BlockStore& registry() const noexcept { return registry_; }
    SimTime first_seen(const Digest& block) const;

    void round_entered(ReplicaId r, Round round);
    void qc_vote(ReplicaId r, Round round, Prefix prefix, const Digest& block);
    void cc_vote(ReplicaId r, const QuorumCertificate& qc);
    void tc_vote(ReplicaId r, Round round);
    void qc_seen(ReplicaId r, const QcPtr& qc);
    void qc_high(ReplicaId r, const QcPtr& qc);
    void commit(ReplicaId r, const QcPtr& qc);
    void deliver(ReplicaId r, const MessageRef& m);
    void batch_created(ReplicaId r, const BatchPtr& b);

    // End-of-run liveness: honest batches broadcast and entries delivered by
    // `deadline` must have reached every honest replica.
    void finalize(SimTime deadline);

    bool safety_violated() const noexcept { return safety_violations_ > 0; }
    bool liveness_violated() const noexcept { return liveness_violations_ > 0; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

    Round committed_round(ReplicaId r) const { return committed_[r] ? committed_[r]->round() : 0; }
    Round min_honest_committed_round() const;
    const QcPtr& highest_commit() const noexcept { return highest_commit_; }
    std::uint64_t delivered(ReplicaId r) const { return delivered_count_[r]; }
    const std::vector<MessageRef>& global_log() const noexcept { return log_; }
    std::uint64_t unchecked_containment() const noexcept { return unchecked_; }
    // Largest certified prefix any honest replica saw for the round's block.
    Prefix best_qc_prefix(Round round) const;

private:
    void violate(ViolationKind kind, ReplicaId r, std::string detail, std::vector<std::string> artifacts = {});
    static std::string describe(const QuorumCertificate& qc);

    const ProtocolConfig config_;
    std::vector<bool> honest_;
    BlockStore registry_;
    std::unordered_map<Digest, SimTime, DigestHash> first_seen_;
    SimTime now_ = 0;

    std::vector<Violation> violations_;
    std::uint64_t safety_violations_ = 0;
    std::uint64_t liveness_violations_ = 0;
    std::uint64_t unchecked_ = 0;

    std::map<Round, Digest> qc_blocks_;
    std::map<Round, Prefix> best_qc_prefix_;
    std::map<std::pair<Rank, Digest>, QcPtr> commits_;
    std::vector<QcPtr> committed_;
    QcPtr highest_commit_;

    std::vector<MessageRef> log_;
    std::vector<SimTime> log_first_time_;
    std::vector<std::uint64_t> delivered_count_;
    std::vector<std::set<std::pair<ReplicaId, std::uint64_t>>> delivered_slots_;

    std::vector<Round> rounds_;
    std::vector<Rank> qc_high_;
    std::vector<Round> tc_voted_;
    std::vector<std::set<Round>> cc_voted_;
    struct LastVote {
        Round round = 0;
        Prefix prefix = 0;
        Digest block;
    };
    std::vector<LastVote> last_qc_vote_;

    struct Created {
        ReplicaId author;
        std::uint64_t sn;
        SimTime at;
    };
    std::vector<Created> honest_batches_;
};

}  // namespace raptr::sim
