// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "sim/observer.hpp"

#include <algorithm>
#include <limits>

#include "core/errors.hpp"

namespace raptr::sim {

std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::kTotalOrder: return "total-order";
        case ViolationKind::kDuplication: return "duplication";
        case ViolationKind::kPrefixContainment: return "prefix-containment";
        case ViolationKind::kQcUniqueness: return "qc-uniqueness";
        case ViolationKind::kVoteDiscipline: return "vote-discipline";
        case ViolationKind::kMonotonicity: return "monotonicity";
        case ViolationKind::kValidity: return "validity";
        case ViolationKind::kTotality: return "totality";
    }
    return "?";
}

bool is_safety(ViolationKind k) { return k != ViolationKind::kValidity && k != ViolationKind::kTotality; }

Observer::Observer(const ProtocolConfig& config, std::vector<bool> honest, BlockPtr genesis)
    : config_(config),
      honest_(std::move(honest)),
      registry_(genesis),
      committed_(config.n),
      delivered_count_(config.n, 0),
      delivered_slots_(config.n),
      rounds_(config.n, 0),
      qc_high_(config.n, Rank{0, 0}),
      tc_voted_(config.n, 0),
      cc_voted_(config.n),
      last_qc_vote_(config.n) {
    first_seen_[genesis->digest()] = 0;
}

void Observer::violate(ViolationKind kind, ReplicaId r, std::string detail, std::vector<std::string> artifacts) {
    if (is_safety(kind))
        ++safety_violations_;
    else
        ++liveness_violations_;
    // Cap the stored list; counters keep the totals.
    if (violations_.size() < 64) violations_.push_back({kind, now_, r, std::move(detail), std::move(artifacts)});
}

std::string Observer::describe(const QuorumCertificate& qc) {
    return "QC(round=" + std::to_string(qc.round()) + ", block=" + qc.block().short_hex() +
           ", prefix=" + std::to_string(qc.prefix()) + ")";
}

void Observer::register_block(const BlockPtr& b) {
    if (registry_.insert(b)) first_seen_.emplace(b->digest(), now_);
}

SimTime Observer::first_seen(const Digest& block) const {
    auto it = first_seen_.find(block);
    return it == first_seen_.end() ? -1 : it->second;
}

void Observer::round_entered(ReplicaId r, Round round) {
    if (round <= rounds_[r])
        violate(ViolationKind::kMonotonicity, r,
                "r_cur moved from " + std::to_string(rounds_[r]) + " to " + std::to_string(round));
    rounds_[r] = std::max(rounds_[r], round);
}

void Observer::qc_vote(ReplicaId r, Round round, Prefix prefix, const Digest& block) {
    if (round <= tc_voted_[r])
        violate(ViolationKind::kVoteDiscipline, r,
                "QC-vote in round " + std::to_string(round) + " after timeout vote in round " +
                    std::to_string(tc_voted_[r]));
    auto& last = last_qc_vote_[r];
    if (round < last.round || (round == last.round && (block != last.block || prefix <= last.prefix)))
        violate(ViolationKind::kVoteDiscipline, r,
                "QC-vote (" + std::to_string(round) + "," + std::to_string(prefix) + ") on " + block.short_hex() +
                    " after (" + std::to_string(last.round) + "," + std::to_string(last.prefix) + ") on " +
                    last.block.short_hex());
    last = {round, prefix, block};
}

void Observer::cc_vote(ReplicaId r, const QuorumCertificate& qc) {
    if (qc.round() <= tc_voted_[r])
        violate(ViolationKind::kVoteDiscipline, r,
                "CC-vote for round " + std::to_string(qc.round()) + " after timeout vote in round " +
                    std::to_string(tc_voted_[r]));
    if (!cc_voted_[r].insert(qc.round()).second)
        violate(ViolationKind::kVoteDiscipline, r, "second CC-vote in round " + std::to_string(qc.round()));
}

void Observer::tc_vote(ReplicaId r, Round round) {
    if (round <= tc_voted_[r])
        violate(ViolationKind::kVoteDiscipline, r, "repeated timeout vote in round " + std::to_string(round));
    tc_voted_[r] = std::max(tc_voted_[r], round);
}

void Observer::qc_seen(ReplicaId r, const QcPtr& qc) {
    if (qc->is_genesis()) return;
    auto [it, fresh] = qc_blocks_.emplace(qc->round(), qc->block());
    auto& best = best_qc_prefix_[qc->round()];
    best = std::max(best, qc->prefix());
    if (!fresh && it->second != qc->block())
        violate(ViolationKind::kQcUniqueness, r,
                "two blocks certified in round " + std::to_string(qc->round()),
                {it->second.hex(), qc->block().hex()});
}

Prefix Observer::best_qc_prefix(Round round) const {
    auto it = best_qc_prefix_.find(round);
    return it == best_qc_prefix_.end() ? 0 : it->second;
}

void Observer::qc_high(ReplicaId r, const QcPtr& qc) {
    if (qc->rank() < qc_high_[r])
        violate(ViolationKind::kMonotonicity, r,
                "qc_high moved back to " + describe(*qc) + " from " + to_string(qc_high_[r]));
    qc_high_[r] = std::max(qc_high_[r], qc->rank());
}

void Observer::commit(ReplicaId r, const QcPtr& qc) {
    if (committed_[r] && qc->rank() <= committed_[r]->rank())
        violate(ViolationKind::kMonotonicity, r,
                "committed " + describe(*qc) + " after " + describe(*committed_[r]));
    committed_[r] = qc;
    if (!highest_commit_ || highest_commit_->rank() < qc->rank()) highest_commit_ = qc;

    auto key = std::make_pair(qc->rank(), qc->block());
    auto [it, fresh] = commits_.emplace(key, qc);
    if (!fresh) return;
    auto check = [&](const QcPtr& lo, const QcPtr& hi) {
        try {
            if (!is_prefix_of(*lo, *hi, registry_))
                violate(ViolationKind::kPrefixContainment, r,
                        "committed " + describe(*lo) + " is not a prefix of " + describe(*hi),
                        {lo->block().hex(), hi->block().hex()});
        } catch (const DataUnavailable&) {
            ++unchecked_;
        }
    };
    if (it != commits_.begin()) check(std::prev(it)->second, qc);
    if (auto next = std::next(it); next != commits_.end()) check(qc, next->second);
}

void Observer::deliver(ReplicaId r, const MessageRef& m) {
    if (!delivered_slots_[r].emplace(m.author, m.sn).second)
        violate(ViolationKind::kDuplication, r,
                "slot (" + std::to_string(m.author) + "," + std::to_string(m.sn) + ") delivered twice");
    const std::uint64_t k = delivered_count_[r]++;
    if (k < log_.size()) {
        if (!(log_[k] == m))
            violate(ViolationKind::kTotalOrder, r,
                    "position " + std::to_string(k) + " holds " + m.digest.short_hex() + " but another replica has " +
                        log_[k].digest.short_hex(),
                    {log_[k].digest.hex(), m.digest.hex()});
    } else {
        log_.push_back(m);
        log_first_time_.push_back(now_);
    }
}

void Observer::batch_created(ReplicaId r, const BatchPtr& b) {
    if (honest_[r]) honest_batches_.push_back({r, b->sn(), b->created_at()});
}

Round Observer::min_honest_committed_round() const {
    Round lo = std::numeric_limits<Round>::max();
    for (ReplicaId r = 0; r < config_.n; ++r)
        if (honest_[r]) lo = std::min(lo, committed_round(r));
    return lo == std::numeric_limits<Round>::max() ? 0 : lo;
}

void Observer::finalize(SimTime deadline) {
    for (const auto& c : honest_batches_) {
        if (c.at > deadline) continue;
        for (ReplicaId r = 0; r < config_.n; ++r) {
            if (!honest_[r] || delivered_slots_[r].count({c.author, c.sn})) continue;
            violate(ViolationKind::kValidity, r,
                    "batch (" + std::to_string(c.author) + "," + std::to_string(c.sn) + ") broadcast at " +
                        std::to_string(c.at) + " never delivered");
            break;
        }
    }
    for (std::size_t k = 0; k < log_.size(); ++k) {
        if (log_first_time_[k] > deadline) break;
        for (ReplicaId r = 0; r < config_.n; ++r) {
            if (!honest_[r] || delivered_count_[r] > k) continue;
            violate(ViolationKind::kTotality, r,
                    "log position " + std::to_string(k) + " delivered at " + std::to_string(log_first_time_[k]) +
                        " is missing");
            return;
        }
    }
}

}  // namespace raptr::sim
