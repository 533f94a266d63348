// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "qs/quorum_store.hpp"

#include <algorithm>

namespace raptr::qs {

Fetcher::Fetcher(ReplicaId self, const ProtocolConfig& config, ReplicaEnv& env, ReplicaObserver* observer,
                 HaveFn have)
    : self_(self), config_(config), env_(env), observer_(observer), have_(std::move(have)) {}

void Fetcher::request(const Digest& d, bool block, std::vector<ReplicaId> hints) {
    if (have_(d, block)) return;
    std::vector<ReplicaId> clean;
    for (auto h : hints)
        if (h != self_ && h < config_.n && std::find(clean.begin(), clean.end(), h) == clean.end())
            clean.push_back(h);
    auto it = outstanding_.find(d);
    if (it != outstanding_.end()) {
        auto& item = it->second;
        const auto known = item.hints.size();
        for (auto h : clean)
            if (std::find(item.hints.begin(), item.hints.end(), h) == item.hints.end()) item.hints.push_back(h);
        if (item.hints.size() > known) {
            item.next = known;
            dispatch({d});
        }
        return;
    }
    if (clean.empty())
        for (ReplicaId r = 0; r < config_.n; ++r)
            if (r != self_) clean.push_back(r);
    if (clean.empty()) return;
    Item item;
    item.block = block;
    item.hints = std::move(clean);
    outstanding_.emplace(d, std::move(item));
    dispatch({d});
}

void Fetcher::dispatch(const std::vector<Digest>& digests) {
    std::map<ReplicaId, FetchRequestMsg> per_target;
    std::uint32_t cycles = 0;
    for (const auto& d : digests) {
        auto& item = outstanding_.at(d);
        const auto target = item.hints[item.next % item.hints.size()];
        ++item.next;
        ++item.attempts;
        item.timer = next_timer_;
        cycles = std::max<std::uint32_t>(cycles, (item.attempts - 1) / item.hints.size());
        auto& req = per_target[target];
        (item.block ? req.blocks : req.batches).push_back(d);
    }
    for (auto& [target, req] : per_target) {
        ++requests_sent_;
        if (observer_) observer_->on_fetch_request(self_, req.batches.size() + req.blocks.size());
        env_.send(target, std::make_shared<const Message>(std::move(req)));
    }
    const auto id = next_timer_++;
    timers_[id] = digests;
    const SimTime timeout = 2 * config_.delta * (SimTime{1} << std::min<std::uint32_t>(cycles, 3));
    env_.set_timer({TimerKind::kFetchRetry, id}, timeout);
}

void Fetcher::on_timer(std::uint64_t id) {
    auto it = timers_.find(id);
    if (it == timers_.end()) return;
    auto digests = std::move(it->second);
    timers_.erase(it);
    std::vector<Digest> retry;
    for (const auto& d : digests) {
        auto o = outstanding_.find(d);
        if (o == outstanding_.end() || o->second.timer != id) continue;
        if (have_(d, o->second.block)) {
            outstanding_.erase(o);
            continue;
        }
        retry.push_back(d);
    }
    if (!retry.empty()) dispatch(retry);
}

QuorumStore::QuorumStore(ReplicaId self, const ProtocolConfig& config, const VariantPolicy& policy,
                         const crypto::Signer& signer, CertVerifier& verifier, ReplicaEnv& env,
                         ReplicaObserver* observer)
    : self_(self),
      config_(config),
      policy_(policy),
      signer_(signer),
      verifier_(verifier),
      env_(env),
      observer_(observer),
      fetcher_(self, config, env, observer, nullptr) {}

BatchPtr QuorumStore::broadcast(std::vector<TxId> txs, std::uint32_t tx_bytes) {
    auto b = Batch::make(self_, next_sn_++, env_.now(), std::move(txs), tx_bytes);
    my_batches_[b->sn()] = b;
    if (observer_) observer_->on_batch_created(self_, b);
    env_.multicast(std::make_shared<const Message>(BatchMsg{b}));
    return b;
}

BatchPtr QuorumStore::batch(const Digest& d) const {
    auto it = batches_.find(d);
    return it == batches_.end() ? nullptr : it->second;
}

PoaPtr QuorumStore::poa(const Digest& d) const {
    auto it = poas_.find(d);
    return it == poas_.end() ? nullptr : it->second;
}

QuorumStore::Candidate* QuorumStore::candidate_for(const BatchInfo& info) {
    if (slot_delivered(info.author, info.sn)) return nullptr;
    auto [it, inserted] = candidates_.try_emplace(SlotKey{info.author, info.sn, info.digest});
    if (inserted) it->second.info = info;
    return &it->second;
}

void QuorumStore::store(const BatchPtr& b) {
    batches_.emplace(b->digest(), b);
    fetcher_.arrived(b->digest());
    if (auto* c = candidate_for(b->info())) {
        c->have_content = true;
        if (observer_ && !policy_.poa_only_blocks())
            observer_->on_batch_includable(self_, b->digest(),
                                           std::max(env_.now(), b->created_at() + config_.min_batch_age));
    }
}

bool QuorumStore::on_batch(ReplicaId from, const BatchPtr& b) {
    if (b->author() != from || !b->digest_valid()) {
        if (observer_) observer_->on_rejected(self_, from, "batch");
        return false;
    }
    if (has_batch(b->digest())) return false;
    const auto slot = std::make_pair(b->author(), b->sn());
    auto [it, fresh] = slots_.try_emplace(slot, b->digest());
    store(b);
    if (!fresh) {
        if (it->second != b->digest()) equivocators_.insert(b->author());
        return true;
    }
    PoaVoteMsg vote{b->sn(), b->digest(), signer_.sign(0, poa_vote_statement(b->digest(), b->sn(), b->author()))};
    env_.send(b->author(), std::make_shared<const Message>(std::move(vote)));
    return true;
}

bool QuorumStore::on_fetched_batch(const BatchPtr& b) {
    if (!b->digest_valid() || has_batch(b->digest())) return false;
    auto [it, fresh] = slots_.try_emplace({b->author(), b->sn()}, b->digest());
    if (!fresh && it->second != b->digest()) equivocators_.insert(b->author());
    store(b);
    return true;
}

void QuorumStore::on_poa_vote(ReplicaId from, const PoaVoteMsg& vote) {
    auto mb = my_batches_.find(vote.sn);
    if (mb == my_batches_.end() || mb->second->digest() != vote.digest || !verifier_.poa_vote(from, vote, self_)) {
        if (observer_) observer_->on_rejected(self_, from, "poa-vote");
        return;
    }
    auto& votes = poa_votes_[vote.sn];
    if (!votes.emplace(from, vote.sig).second) return;
    if (votes.size() != config_.quorum_size) return;
    std::vector<PartialSignature> sigs;
    std::vector<ReplicaId> voters;
    for (const auto& [r, s] : votes) {
        voters.push_back(r);
        sigs.push_back(s);
    }
    auto agg = signer_.combine(sigs);
    if (!agg) return;
    auto p = ProofOfAvailability::make(mb->second->info(), std::move(voters), std::move(*agg));
    env_.multicast(std::make_shared<const Message>(PoaMsg{p}));
}

bool QuorumStore::on_poa(const PoaPtr& p) {
    if (!verifier_.poa(*p)) return false;
    const auto& info = p->batch();
    if (!poas_.emplace(info.digest, p).second) return true;
    if (auto* c = candidate_for(info)) {
        c->poa = p;
        if (observer_) observer_->on_batch_includable(self_, info.digest, env_.now());
    }
    if (!has_batch(info.digest) && !slot_delivered(info.author, info.sn))
        fetcher_.request(info.digest, false, p->voters());
    return true;
}

void QuorumStore::on_new_block(const Block& block, ReplicaId leader) {
    for (const auto& p : block.payload().poas) on_poa(p);
    for (const auto& sub : block.payload().sub_blocks)
        for (const auto& info : sub)
            if (!has_batch(info.digest) && !slot_delivered(info.author, info.sn))
                fetcher_.request(info.digest, false, {leader, info.author});
}

void QuorumStore::on_fetch_request(ReplicaId from, const FetchRequestMsg& req, const BlockStore& blocks) {
    FetchResponseMsg resp;
    for (const auto& d : req.batches)
        if (auto b = batch(d)) resp.batches.push_back(std::move(b));
    for (const auto& d : req.blocks)
        if (auto b = blocks.get(d)) resp.blocks.push_back(std::move(b));
    if (resp.batches.empty() && resp.blocks.empty()) return;
    env_.send(from, std::make_shared<const Message>(std::move(resp)));
}

BlockPayload QuorumStore::get_payload(const std::unordered_set<Digest, DigestHash>& excluded, bool optimistic) const {
    BlockPayload payload;
    std::vector<BatchInfo> loose;
    const SimTime now = env_.now();
    for (const auto& [key, c] : candidates_) {
        if (excluded.count(c.info.digest)) continue;
        if (c.poa) {
            payload.poas.push_back(c.poa);
            continue;
        }
        if (!optimistic || !c.have_content || is_equivocator(c.info.author)) continue;
        if (now - c.info.created_at < config_.min_batch_age) continue;
        loose.push_back(c.info);
    }
    payload.sub_blocks = group_into_sub_blocks(std::move(loose), config_.sub_blocks);
    return payload;
}

void QuorumStore::mark_delivered(const MessageRef& m) {
    delivered_slots_.insert({m.author, m.sn});
    auto lo = candidates_.lower_bound(SlotKey{m.author, m.sn, Digest{}});
    while (lo != candidates_.end() && std::get<0>(lo->first) == m.author && std::get<1>(lo->first) == m.sn)
        lo = candidates_.erase(lo);
    if (m.author == self_) {
        my_batches_.erase(m.sn);
        poa_votes_.erase(m.sn);
    }
}

void QuorumStore::prune(Round round) {
    for (auto it = delivered_round_.begin(); it != delivered_round_.end();) {
        if (it->second < round) {
            batches_.erase(it->first);
            poas_.erase(it->first);
            it = delivered_round_.erase(it);
        } else {
            ++it;
        }
    }
}

}  // namespace raptr::qs
