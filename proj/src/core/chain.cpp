// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/chain.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace raptr {

BlockStore::BlockStore(BlockPtr genesis) : genesis_(std::move(genesis)) {
    blocks_.emplace(genesis_->digest(), genesis_);
}

const Block* BlockStore::find(const Digest& d) const {
    auto it = blocks_.find(d);
    return it == blocks_.end() ? nullptr : it->second.get();
}

BlockPtr BlockStore::get(const Digest& d) const {
    auto it = blocks_.find(d);
    return it == blocks_.end() ? nullptr : it->second;
}

bool BlockStore::insert(BlockPtr block) {
    auto d = block->digest();
    return blocks_.emplace(d, std::move(block)).second;
}

void BlockStore::prune_below(Round round) {
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        if (it->second->round() < round && !it->second->is_genesis())
            it = blocks_.erase(it);
        else
            ++it;
    }
}

std::vector<BlockPtr> BlockStore::snapshot() const {
    std::vector<BlockPtr> out;
    out.reserve(blocks_.size());
    for (const auto& [d, b] : blocks_) out.push_back(b);
    std::sort(out.begin(), out.end(), [](const BlockPtr& a, const BlockPtr& b) {
        return a->round() != b->round() ? a->round() < b->round() : a->digest() < b->digest();
    });
    return out;
}

std::vector<BlockPrefix> chain_of(const QuorumCertificate& qc, const BlockStore& store) {
    std::vector<BlockPrefix> out;
    Digest at = qc.block();
    Prefix prefix = qc.prefix();
    for (;;) {
        const Block* b = store.find(at);
        if (!b) throw DataUnavailable("missing block " + at.short_hex(), {at});
        out.push_back({at, prefix});
        if (b->is_genesis()) break;
        const auto& parent = b->qc_parent();
        at = parent->block();
        prefix = parent->prefix();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool is_prefix_of(const QuorumCertificate& qc1, const QuorumCertificate& qc2, const BlockStore& store) {
    Digest at = qc2.block();
    Prefix prefix = qc2.prefix();
    for (;;) {
        const Block* b = store.find(at);
        if (!b) throw DataUnavailable("missing block " + at.short_hex(), {at});
        if (at == qc1.block()) return qc1.prefix() <= prefix;
        if (b->is_genesis() || b->round() < qc1.round()) return false;
        const auto& parent = b->qc_parent();
        at = parent->block();
        prefix = parent->prefix();
    }
}

void append_messages(const Block& block, Prefix prefix, std::vector<MessageRef>& out) {
    for (const auto& poa : block.payload().poas) {
        const auto& i = poa->batch();
        out.push_back({i.digest, i.sn, i.author});
    }
    const auto& subs = block.payload().sub_blocks;
    const std::size_t upto = std::min<std::size_t>(prefix, subs.size());
    for (std::size_t k = 0; k < upto; ++k)
        for (const auto& i : subs[k]) out.push_back({i.digest, i.sn, i.author});
}

std::vector<MessageRef> messages_of(std::span<const BlockPrefix> chain, const BlockStore& store,
                                    const std::function<bool(const Digest&)>& has_batch) {
    std::vector<MessageRef> out;
    for (const auto& e : chain) {
        const Block* b = store.find(e.block);
        if (!b) throw DataUnavailable("missing block " + e.block.short_hex(), {e.block});
        append_messages(*b, e.prefix, out);
    }
    if (has_batch) {
        std::vector<Digest> missing;
        for (const auto& m : out)
            if (!has_batch(m.digest)) missing.push_back(m.digest);
        if (!missing.empty()) throw DataUnavailable("missing batch content", std::move(missing));
    }
    return out;
}

}  // namespace raptr
