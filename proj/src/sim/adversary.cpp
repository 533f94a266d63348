// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "sim/adversary.hpp"

#include <algorithm>

#include "core/codec.hpp"

namespace raptr::sim {

void Adversary::outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg) {
    for (ReplicaId r : to) ctx.emit(r, msg);
}

namespace {

class Silent final : public Adversary {
public:
    void outgoing(AdversaryContext&, const std::vector<ReplicaId>&, const MessagePtr&) override {}
};

// Sends its own proposal to even replicas and a conflicting one to odd ones.
class EquivocatingProposer final : public Adversary {
public:
    void outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg) override {
        const auto* p = std::get_if<ProposeMsg>(msg.get());
        if (!p || to.size() < 2) return Adversary::outgoing(ctx, to, msg);
        const Block& b = *p->block;
        BlockPayload payload = b.payload();
        BatchInfo bogus;
        bogus.author = ctx.self();
        bogus.sn = 1'000'000'000ULL + b.round();
        bogus.created_at = 0;
        Encoder e;
        e.str("equivocation");
        e.u64(bogus.sn);
        bogus.digest = e.hash();
        if (payload.sub_blocks.empty())
            payload.sub_blocks.emplace_back();
        payload.sub_blocks.back().push_back(bogus);
        auto alt = std::make_shared<const Message>(ProposeMsg{Block::make(b.round(), b.reason(), std::move(payload))});
        for (ReplicaId r : to) ctx.emit(r, (r == ctx.self() || r % 2 == 0) ? msg : alt);
    }
};

// Sends batches only to a few replicas and never serves fetches.
class SelectiveBatchSender final : public Adversary {
public:
    explicit SelectiveBatchSender(std::vector<ReplicaId> targets) : targets_(std::move(targets)) {}

    void outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg) override {
        if (std::holds_alternative<FetchResponseMsg>(*msg)) return;
        if (!std::holds_alternative<BatchMsg>(*msg)) return Adversary::outgoing(ctx, to, msg);
        std::vector<ReplicaId> recipients = targets_;
        if (recipients.empty()) {
            const auto& cfg = ctx.core().config();
            recipients = {cfg.leader(ctx.core().round() + 1), cfg.leader(ctx.core().round() + 2)};
        }
        recipients.push_back(ctx.self());
        std::sort(recipients.begin(), recipients.end());
        recipients.erase(std::unique(recipients.begin(), recipients.end()), recipients.end());
        for (ReplicaId r : recipients)
            if (std::find(to.begin(), to.end(), r) != to.end()) ctx.emit(r, msg);
    }

private:
    std::vector<ReplicaId> targets_;
};

class VoteWithholder final : public Adversary {
public:
    void outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg) override {
        if (std::holds_alternative<QcVoteMsg>(*msg) || std::holds_alternative<CcVoteMsg>(*msg) ||
            std::holds_alternative<TcVoteMsg>(*msg) || std::holds_alternative<PoaVoteMsg>(*msg)) {
            for (ReplicaId r : to)
                if (r == ctx.self()) ctx.emit(r, msg);
            return;
        }
        Adversary::outgoing(ctx, to, msg);
    }
};

// Replays old consensus traffic, its own and that of others, at random.
class StaleVoteReplayer final : public Adversary {
public:
    void outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg) override {
        Adversary::outgoing(ctx, to, msg);
        remember(msg);
        if (!ring_.empty() && ctx.rng().bernoulli(0.3)) {
            const auto& old = ring_[ctx.rng().below(ring_.size())];
            ctx.emit(static_cast<ReplicaId>(ctx.rng().below(ctx.n())), old);
        }
    }
    void incoming(AdversaryContext&, ReplicaId, const MessagePtr& msg) override { remember(msg); }

private:
    void remember(const MessagePtr& msg) {
        if (channel_of(*msg) != Channel::kConsensus) return;
        if (ring_.size() < kCapacity)
            ring_.push_back(msg);
        else
            ring_[next_++ % kCapacity] = msg;
    }

    static constexpr std::size_t kCapacity = 512;
    std::vector<MessagePtr> ring_;
    std::size_t next_ = 0;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const FaultSpec& fault) {
    switch (fault.behavior) {
        case Behavior::kSilent: return std::make_unique<Silent>();
        case Behavior::kEquivocatingProposer: return std::make_unique<EquivocatingProposer>();
        case Behavior::kSelectiveBatchSender: return std::make_unique<SelectiveBatchSender>(fault.targets);
        case Behavior::kVoteWithholder: return std::make_unique<VoteWithholder>();
        case Behavior::kStaleVoteReplayer: return std::make_unique<StaleVoteReplayer>();
    }
    return std::make_unique<Silent>();
}

}  // namespace raptr::sim
