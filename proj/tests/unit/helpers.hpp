// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "consensus/env.hpp"
#include "consensus/messages.hpp"
#include "core/block.hpp"
#include "core/certificates.hpp"
#include "core/chain.hpp"

namespace raptr::test {

inline Digest digest_of(std::uint64_t v) {
    Encoder e;
    e.str("test").u64(v);
    return e.hash();
}

inline BatchInfo info(ReplicaId author, std::uint64_t sn) {
    return {digest_of(author * 1000003ull + sn), sn, author, 0};
}

// Unsigned certificate with `prefixes[i]` voted by replica i.
inline QcPtr qc_for(Round round, const Digest& block, const std::vector<Prefix>& prefixes, std::uint32_t s) {
    std::vector<VotePrefix> votes;
    for (ReplicaId i = 0; i < prefixes.size(); ++i) votes.push_back({i, prefixes[i]});
    return QuorumCertificate::make(round, block, std::move(votes), AggregateSignature{}, s);
}

inline QcPtr qc_for(const BlockPtr& b, Prefix prefix, std::uint32_t s = 2) {
    return qc_for(b->round(), b->digest(), std::vector<Prefix>(s, prefix), s);
}

// A block in `round` extending `parent`; enters through a full QC when
// possible and through a timeout otherwise.
inline BlockPtr child(const QcPtr& parent, Round round, BlockPayload payload, std::uint32_t sub_blocks) {
    if (round == parent->round() + 1 && (parent->is_genesis() || parent->prefix() == sub_blocks))
        return Block::make(round, EntryReason::full_qc(parent), std::move(payload));
    auto tc = TimeoutCertificate::make(round - 1, {{0, parent->rank()}}, AggregateSignature{});
    return Block::make(round, EntryReason::timeout(tc, parent), std::move(payload));
}

inline BlockPayload payload_of(std::vector<std::vector<BatchInfo>> subs) {
    BlockPayload p;
    p.sub_blocks = std::move(subs);
    return p;
}

struct Sent {
    ReplicaId to;  // kNoReplica for a multicast
    MessagePtr msg;
};

// Records everything a replica does instead of simulating a network.
class ScriptedEnv final : public ReplicaEnv {
public:
    SimTime now() const override { return now_; }
    void send(ReplicaId to, MessagePtr msg) override { sent.push_back({to, std::move(msg)}); }
    void multicast(MessagePtr msg) override { sent.push_back({kNoReplica, std::move(msg)}); }
    void set_timer(const TimerKey& key, SimTime delay) override { timers[key] = now_ + delay; }
    void cancel_timer(const TimerKey& key) override { timers.erase(key); }

    template <class T>
    std::vector<const T*> all() const {
        std::vector<const T*> out;
        for (const auto& s : sent)
            if (auto* m = std::get_if<T>(s.msg.get())) out.push_back(m);
        return out;
    }
    template <class T>
    std::vector<Sent> taken() {
        std::vector<Sent> out;
        for (const auto& s : sent)
            if (std::holds_alternative<T>(*s.msg)) out.push_back(s);
        return out;
    }

    SimTime now_ = 0;
    std::vector<Sent> sent;
    std::map<TimerKey, SimTime> timers;
};

}  // namespace raptr::test
