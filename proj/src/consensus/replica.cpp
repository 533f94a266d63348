// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/replica.hpp"

#include <algorithm>

namespace raptr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<ReplicaId> voters_of(const QuorumCertificate& qc, Prefix at_least = 0) {
    std::vector<ReplicaId> out;
    for (const auto& v : qc.votes())
        if (v.prefix >= at_least) out.push_back(v.replica);
    return out;
}

MessagePtr wrap(Message m) { return std::make_shared<const Message>(std::move(m)); }

}  // namespace

Replica::Replica(ReplicaId id, const ProtocolConfig& config, std::shared_ptr<const crypto::KeyShareSet> keys,
                 ReplicaEnv& env, ReplicaObserver* observer)
    : id_(id),
      config_(config),
      policy_(config.variant),
      keys_(keys),
      signer_(std::move(keys), id),
      env_(env),
      observer_(observer),
      blocks_(Block::genesis(config.sub_blocks)),
      verifier_(config_, policy_, signer_, blocks_.genesis()->digest()),
      store_(id, config_, policy_, signer_, verifier_, env, observer) {
    qc_high_ = QuorumCertificate::genesis(blocks_.genesis()->digest());
    qc_committed_ = qc_high_;
    entry_reason_ = EntryReason::full_qc(qc_high_);
    frontier_ = {blocks_.genesis()->digest(), 0};
    crypto_hash_sha256_init(&log_hash_);
    store_.fetcher().set_have(
        [this](const Digest& d, bool block) { return block ? blocks_.contains(d) : store_.has_batch(d); });
}

void Replica::start() { try_advance_round(1, EntryReason::full_qc(qc_high_)); }

BlockPtr Replica::proposal(Round r) const {
    auto it = proposals_.find(r);
    return it == proposals_.end() ? nullptr : it->second;
}

Digest Replica::delivered_digest() const {
    auto st = log_hash_;
    Digest d;
    crypto_hash_sha256_final(&st, d.bytes.data());
    return d;
}

BatchPtr Replica::make_batch(std::uint32_t tx_bytes) {
    if (mempool_.empty()) return nullptr;
    const std::size_t take = std::min<std::size_t>(mempool_.size(), config_.batch_capacity);
    std::vector<TxId> txs(mempool_.begin(), mempool_.begin() + take);
    mempool_.erase(mempool_.begin(), mempool_.begin() + take);
    return store_.broadcast(std::move(txs), tx_bytes);
}

void Replica::collect_garbage(Round committed_everywhere) {
    constexpr Round kGrace = 10;
    if (committed_everywhere <= kGrace) return;
    const Round floor = std::min(committed_everywhere - kGrace, frontier_round_);
    blocks_.prune_below(floor);
    store_.prune(floor);
}

void Replica::reject(ReplicaId from, std::string_view what) {
    if (observer_) observer_->on_rejected(id_, from, what);
}

bool Replica::qc_less(const QuorumCertificate& a, const QuorumCertificate& b) const {
    return policy_.compare(a, b) < 0;
}

void Replica::on_message(ReplicaId from, const Message& msg) {
    std::visit(Overloaded{
                   [&](const BatchMsg& m) {
                       if (store_.on_batch(from, m.batch)) on_batch_arrival(m.batch->digest());
                   },
                   [&](const PoaVoteMsg& m) { store_.on_poa_vote(from, m); },
                   [&](const PoaMsg& m) {
                       if (!store_.on_poa(m.poa)) reject(from, "poa");
                   },
                   [&](const FetchRequestMsg& m) { store_.on_fetch_request(from, m, blocks_); },
                   [&](const auto& m) { handle(from, m); },
               },
               msg);
}

void Replica::on_timer(const TimerKey& key) {
    switch (key.kind) {
        case TimerKind::kQcVote: qc_vote(); break;
        case TimerKind::kRoundTimeout: on_round_timeout(); break;
        case TimerKind::kFetchRetry: store_.fetcher().on_timer(key.id); break;
    }
}

bool Replica::verify_block(const Block& b) {
    if (b.is_genesis() || b.round() != b.reason().round()) return false;
    if (!verifier_.reason(b.reason())) return false;
    if (!b.payload_well_formed(config_.sub_blocks)) return false;
    if (!policy_.optimistic_payload(b.reason()) && b.payload().has_optimistic()) return false;
    for (const auto& p : b.payload().poas)
        if (!verifier_.poa(*p)) return false;
    return true;
}

bool Replica::accept_block(const BlockPtr& b) {
    if (blocks_.contains(b->digest())) return true;
    if (!verify_block(*b)) return false;
    blocks_.insert(b);
    store_.on_new_block(*b, config_.leader(b->round()));
    on_block_arrival(b->digest());
    return true;
}

void Replica::handle(ReplicaId from, const ProposeMsg& m) {
    const auto& b = m.block;
    if (!accept_block(b)) return reject(from, "proposal");
    const Round r = b->round();
    on_new_qc(b->reason().qc);
    if (from != config_.leader(r) || r < r_cur_ || r <= r_timeout_ || proposals_.count(r) ||
        b->reason().round() != r)
        return;
    proposals_[r] = b;
    try_advance_round(r, b->reason());
    if (r != r_cur_) return;
    proposal_missing_.clear();
    for (const auto& sub : b->payload().sub_blocks)
        for (const auto& info : sub)
            if (!store_.has_batch(info.digest)) proposal_missing_.insert(info.digest);
    if (policy_.vote_timer()) env_.set_timer({TimerKind::kQcVote, 0}, config_.qc_vote_delay());
    if (proposal_missing_.empty()) qc_vote();
}

void Replica::handle(ReplicaId from, const AdvanceRoundMsg& m) {
    if (!verifier_.reason(m.reason)) return reject(from, "advance-round");
    on_new_qc(m.reason.qc);
    try_advance_round(m.reason.round(), m.reason);
}

void Replica::handle(ReplicaId from, const QcVoteMsg& m) {
    if (!verifier_.qc_vote(from, m)) return reject(from, "qc-vote");
    if (m.round < r_cur_) return;
    auto& set = qc_votes_[m.round][m.block];
    auto it = set.votes.find(from);
    if (it != set.votes.end() && it->second.prefix >= m.prefix) return;
    set.votes[from] = {m.prefix, m.sig};
    if (m.prefix == config_.sub_blocks) ++set.full;
    if (set.votes.size() < config_.quorum_size) return;
    const bool full_ready = set.full >= config_.availability;
    if (!(qc_high_->round() < m.round || full_ready)) return;
    if (qc_high_->round() >= m.round && set.full_formed) return;
    std::vector<VotePrefix> votes;
    std::vector<PartialSignature> sigs;
    for (const auto& [r, e] : set.votes) {
        votes.push_back({r, e.prefix});
        sigs.push_back(e.sig);
    }
    auto agg = signer_.combine(sigs);
    if (!agg) return;
    auto qc = QuorumCertificate::make(m.round, m.block, std::move(votes), std::move(*agg), config_.availability);
    if (qc->prefix() == config_.sub_blocks) set.full_formed = true;
    on_new_qc(qc);
}

void Replica::handle(ReplicaId from, const CcVoteMsg& m) {
    if (!verifier_.qc(*m.qc) || m.qc->is_genesis() || !verifier_.cc_vote(from, m)) return reject(from, "cc-vote");
    on_new_qc(m.qc);
    const Round r = m.qc->round();
    if (r < vote_floor_) return;
    auto& votes = cc_votes_[r];
    if (!votes.emplace(from, CertVote{m.qc, m.sig}).second) return;
    if (votes.size() < config_.quorum_size) return;

    std::vector<std::pair<ReplicaId, const CertVote*>> sel;
    for (const auto& [q, v] : votes) sel.emplace_back(q, &v);
    std::sort(sel.begin(), sel.end(), [&](const auto& a, const auto& b) {
        const int c = policy_.compare(*a.second->qc, *b.second->qc);
        if (c != 0) return c > 0;
        if (a.second->qc->block() != b.second->qc->block()) return a.second->qc->block() < b.second->qc->block();
        return a.first < b.first;
    });
    sel.resize(config_.quorum_size);
    const QcPtr qc_max = sel.front().second->qc;
    const QcPtr qc_min = sel.back().second->qc;
    if (policy_.compare(*qc_min, *qc_committed_) <= 0) return;

    std::vector<VotePrefix> prefixes;
    std::vector<PartialSignature> sigs;
    for (const auto& [q, v] : sel) {
        if (v->qc->block() != qc_max->block()) return;
        prefixes.push_back({q, v->qc->prefix()});
        sigs.push_back(v->sig);
    }
    auto agg = signer_.combine(sigs);
    if (!agg) return;
    auto cc = CommitCertificate::make(r, qc_max->block(), std::move(prefixes), std::move(*agg));
    commit_qc(qc_min);
    try_advance_round(r + 1, EntryReason::commit(cc, qc_max));
}

void Replica::handle(ReplicaId from, const TcVoteMsg& m) {
    if (m.reason.round() != m.round) return;
    if (!verifier_.reason(m.reason) || !verifier_.qc(*m.qc) || !verifier_.tc_vote(from, m))
        return reject(from, "tc-vote");
    on_new_qc(m.qc);
    try_advance_round(m.round, m.reason);
    if (m.round < vote_floor_) return;
    auto& votes = tc_votes_[m.round];
    if (!votes.emplace(from, CertVote{m.qc, m.sig}).second) return;
    if (votes.size() != config_.quorum_size) return;

    std::vector<VoteRank> data;
    std::vector<PartialSignature> sigs;
    QcPtr qc_max;
    ReplicaId max_from = 0;
    for (const auto& [q, v] : votes) {
        data.push_back({q, v.qc->rank()});
        sigs.push_back(v.sig);
        if (!qc_max) {
            qc_max = v.qc;
            max_from = q;
            continue;
        }
        const int c = policy_.compare(*v.qc, *qc_max);
        if (c > 0 || (c == 0 && (v.qc->block() < qc_max->block() ||
                                 (v.qc->block() == qc_max->block() && q < max_from)))) {
            qc_max = v.qc;
            max_from = q;
        }
    }
    auto agg = signer_.combine(sigs);
    if (!agg) return;
    auto tc = TimeoutCertificate::make(m.round, std::move(data), std::move(*agg));
    if (observer_) observer_->on_tc_formed(id_, tc);
    try_advance_round(m.round + 1, EntryReason::timeout(tc, qc_max));
}

void Replica::handle(ReplicaId from, const FetchResponseMsg& m) {
    for (const auto& b : m.batches)
        if (store_.on_fetched_batch(b)) on_batch_arrival(b->digest());
    for (const auto& b : m.blocks)
        if (!accept_block(b)) reject(from, "fetched-block");
}

void Replica::try_advance_round(Round r, const EntryReason& reason) {
    if (reason.round() != r || r <= r_cur_) return;
    r_cur_ = r;
    entry_reason_ = reason;
    proposal_missing_.clear();
    my_tc_vote_.reset();
    if (observer_) observer_->on_round_entered(id_, r, reason);

    vote_floor_ = r >= 2 ? r - 2 : 0;
    qc_votes_.erase(qc_votes_.begin(), qc_votes_.lower_bound(vote_floor_));
    cc_votes_.erase(cc_votes_.begin(), cc_votes_.lower_bound(vote_floor_));
    tc_votes_.erase(tc_votes_.begin(), tc_votes_.lower_bound(vote_floor_));
    cc_voted_.erase(cc_voted_.begin(), cc_voted_.lower_bound(vote_floor_));
    proposals_.erase(proposals_.begin(), proposals_.lower_bound(vote_floor_));

    const ReplicaId leader = config_.leader(r);
    if (leader == id_) {
        auto block = Block::make(r, reason, build_payload(reason));
        if (observer_) observer_->on_proposed(id_, block);
        env_.multicast(wrap(ProposeMsg{std::move(block)}));
    } else {
        env_.send(leader, wrap(AdvanceRoundMsg{reason}));
    }
    env_.cancel_timer({TimerKind::kQcVote, 0});
    env_.set_timer({TimerKind::kRoundTimeout, 0}, config_.round_timeout());
}

BlockPayload Replica::build_payload(const EntryReason& reason) {
    std::vector<MessageRef> refs;
    const QuorumCertificate* cert = reason.qc.get();
    Digest at = cert->block();
    Prefix p = cert->prefix();
    for (;;) {
        const Block* b = blocks_.find(at);
        if (!b) {
            store_.fetcher().request(at, true, voters_of(*cert));
            return BlockPayload::empty(config_.sub_blocks);
        }
        if (b->is_genesis() || b->round() < frontier_round_) break;
        append_messages(*b, p, refs);
        if (at == frontier_.block) break;
        cert = b->qc_parent().get();
        at = cert->block();
        p = cert->prefix();
    }
    std::unordered_set<Digest, DigestHash> excluded;
    excluded.reserve(refs.size());
    for (const auto& m : refs) excluded.insert(m.digest);
    return store_.get_payload(excluded, policy_.optimistic_payload(reason));
}

void Replica::on_new_qc(const QcPtr& qc) {
    if (observer_) observer_->on_qc(id_, qc);
    if (qc_less(*qc_high_, *qc)) {
        qc_high_ = qc;
        if (observer_) observer_->on_qc_high(id_, qc);
    }
    const Round r = qc->round();
    if (!qc->is_genesis() && !is_cc_voted(r) && r > r_timeout_) {
        cc_voted_.insert(r);
        auto sig = signer_.sign(qc->prefix(), cc_vote_statement(qc->block(), r, qc->prefix()));
        if (observer_) observer_->on_cc_vote(id_, qc);
        env_.multicast(wrap(CcVoteMsg{qc, std::move(sig)}));
    }
    if (!qc->is_genesis() && qc->prefix() == config_.sub_blocks) try_advance_round(r + 1, EntryReason::full_qc(qc));
    if (qc->is_genesis()) return;
    fetch_qc_data(*qc);
    if (config_.two_chain_commit) two_chain_check(qc);
}

void Replica::fetch_qc_data(const QuorumCertificate& qc) {
    const Block* b = blocks_.find(qc.block());
    if (!b) {
        if (policy_.compare(qc.rank(), qc_committed_->rank()) > 0)
            store_.fetcher().request(qc.block(), true, voters_of(qc));
        return;
    }
    const auto& subs = b->payload().sub_blocks;
    const std::size_t upto = std::min<std::size_t>(qc.prefix(), subs.size());
    for (std::size_t k = 0; k < upto; ++k)
        for (const auto& info : subs[k]) {
            if (store_.has_batch(info.digest) || store_.slot_delivered(info.author, info.sn)) continue;
            auto hints = voters_of(qc, static_cast<Prefix>(k + 1));
            hints.push_back(info.author);
            hints.push_back(config_.leader(b->round()));
            store_.fetcher().request(info.digest, false, std::move(hints));
        }
}

bool Replica::two_chain_check(const QcPtr& qc) {
    Digest at = qc->block();
    const QuorumCertificate* cert = qc.get();
    for (;;) {
        const Block* b = blocks_.find(at);
        if (!b) {
            awaited_blocks_.insert(at);
            if (std::find(pending_chain_qcs_.begin(), pending_chain_qcs_.end(), qc) == pending_chain_qcs_.end())
                pending_chain_qcs_.push_back(qc);
            store_.fetcher().request(at, true, voters_of(*cert));
            return false;
        }
        if (b->is_genesis() || b->round() <= qc_committed_->round()) return true;
        const auto& parent = b->qc_parent();
        if (b->round() == parent->round() + 1 && policy_.compare(*parent, *qc_committed_) > 0) {
            commit_qc(parent);
            return true;
        }
        cert = parent.get();
        at = parent->block();
    }
}

void Replica::commit_qc(const QcPtr& qc) {
    if (policy_.compare(*qc, *qc_committed_) <= 0) return;
    qc_committed_ = qc;
    if (observer_) observer_->on_commit(id_, qc);
    try_deliver();
}

void Replica::try_deliver() {
    awaited_batches_.clear();
    if (qc_committed_->block() == frontier_.block && qc_committed_->prefix() <= frontier_.prefix) return;

    struct Element {
        const Block* block;
        Prefix prefix;
        const QuorumCertificate* cert;
    };
    std::vector<Element> chain;
    const QuorumCertificate* cert = qc_committed_.get();
    Digest at = cert->block();
    Prefix p = cert->prefix();
    for (;;) {
        const Block* b = blocks_.find(at);
        if (!b) {
            awaited_blocks_.insert(at);
            store_.fetcher().request(at, true, voters_of(*cert));
            return;
        }
        chain.push_back({b, p, cert});
        if (at == frontier_.block || b->is_genesis() || b->round() < frontier_round_) break;
        cert = b->qc_parent().get();
        at = cert->block();
        p = cert->prefix();
    }
    std::reverse(chain.begin(), chain.end());

    struct Pending {
        MessageRef ref;
        Round round;
        const Element* element;
        // Sub-block position (1-based) for optimistic batches, 0 for PoAs.
        Prefix position;
    };
    std::vector<Pending> todo;
    for (const auto& e : chain) {
        const auto& payload = e.block->payload();
        auto add = [&](const BatchInfo& i, Prefix position) {
            if (!store_.slot_delivered(i.author, i.sn))
                todo.push_back({{i.digest, i.sn, i.author}, e.block->round(), &e, position});
        };
        for (const auto& poa : payload.poas) add(poa->batch(), 0);
        const auto upto = std::min<std::size_t>(e.prefix, payload.sub_blocks.size());
        for (std::size_t k = 0; k < upto; ++k)
            for (const auto& i : payload.sub_blocks[k]) add(i, static_cast<Prefix>(k + 1));
    }
    bool missing = false;
    for (const auto& t : todo) {
        if (store_.has_batch(t.ref.digest)) continue;
        missing = true;
        awaited_batches_.insert(t.ref.digest);
        std::vector<ReplicaId> hints;
        if (auto poa = store_.poa(t.ref.digest)) hints = poa->voters();
        if (t.position > 0) {
            auto holders = voters_of(*t.element->cert, t.position);
            hints.insert(hints.end(), holders.begin(), holders.end());
            hints.push_back(config_.leader(t.element->block->round()));
        }
        hints.push_back(t.ref.author);
        store_.fetcher().request(t.ref.digest, false, std::move(hints));
    }
    if (missing) return;

    for (const auto& t : todo) {
        if (store_.slot_delivered(t.ref.author, t.ref.sn)) continue;
        auto batch = store_.batch(t.ref.digest);
        store_.mark_delivered(t.ref);
        store_.note_delivery_round(t.ref.digest, t.round);
        Encoder e;
        e.digest(t.ref.digest).u64(t.ref.sn).u32(t.ref.author);
        crypto_hash_sha256_update(&log_hash_, e.buffer().data(), e.buffer().size());
        ++delivered_count_;
        if (observer_) observer_->on_deliver(id_, t.ref, batch, t.round);
    }
    frontier_ = {qc_committed_->block(), qc_committed_->prefix()};
    frontier_round_ = qc_committed_->round();
}

void Replica::qc_vote() {
    auto it = proposals_.find(r_cur_);
    if (it == proposals_.end()) return;
    const Block& b = *it->second;
    const Prefix p = available_prefix(b, [this](const Digest& d) { return store_.has_batch(d); });
    if (!policy_.partial_votes() && p < config_.sub_blocks) return;
    if (r_cur_ <= r_timeout_ || !(last_qc_vote_ < Rank{r_cur_, p})) return;
    last_qc_vote_ = {r_cur_, p};
    auto sig = signer_.sign(p, qc_vote_statement(b.digest(), r_cur_, p));
    if (observer_) observer_->on_qc_vote(id_, r_cur_, p, b.digest());
    env_.multicast(wrap(QcVoteMsg{r_cur_, p, b.digest(), std::move(sig)}));
}

void Replica::on_round_timeout() {
    if (r_timeout_ < r_cur_) {
        r_timeout_ = r_cur_;
        auto sig = signer_.sign(0, tc_vote_statement(r_cur_, qc_high_->round(), qc_high_->prefix()));
        my_tc_vote_ = wrap(TcVoteMsg{r_cur_, entry_reason_, qc_high_, std::move(sig)});
        if (observer_) observer_->on_tc_vote(id_, r_cur_);
    }
    if (my_tc_vote_) env_.multicast(my_tc_vote_);
    env_.set_timer({TimerKind::kRoundTimeout, 0}, config_.round_timeout());
}

void Replica::on_block_arrival(const Digest& d) {
    if (awaited_blocks_.erase(d) == 0) return;
    auto pending = std::move(pending_chain_qcs_);
    pending_chain_qcs_.clear();
    for (const auto& q : pending)
        if (policy_.compare(*q, *qc_committed_) > 0) two_chain_check(q);
    try_deliver();
}

void Replica::on_batch_arrival(const Digest& d) {
    if (proposal_missing_.erase(d) && proposal_missing_.empty()) qc_vote();
    if (awaited_batches_.count(d)) try_deliver();
}

}  // namespace raptr
