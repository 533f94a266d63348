// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "core/block.hpp"

namespace raptr {

class BlockStore {
public:
    explicit BlockStore(BlockPtr genesis);

    const Block* find(const Digest& d) const;
    BlockPtr get(const Digest& d) const;
    bool contains(const Digest& d) const { return blocks_.count(d) != 0; }
    bool insert(BlockPtr block);
    const BlockPtr& genesis() const noexcept { return genesis_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    // Stored blocks sorted by (round, digest).
    std::vector<BlockPtr> snapshot() const;
    // Drops blocks with round below `round`; genesis is kept.
    void prune_below(Round round);

private:
    BlockPtr genesis_;
    std::unordered_map<Digest, BlockPtr, DigestHash> blocks_;
};

struct BlockPrefix {
    Digest block;
    Prefix prefix = 0;

    friend bool operator==(const BlockPrefix&, const BlockPrefix&) = default;
};

// Ordered from genesis to block(qc). Throws DataUnavailable naming the first
// missing ancestor.
std::vector<BlockPrefix> chain_of(const QuorumCertificate& qc, const BlockStore& store);

// qc1 precedes or equals qc2 in the chain order.
bool is_prefix_of(const QuorumCertificate& qc1, const QuorumCertificate& qc2, const BlockStore& store);

struct MessageRef {
    Digest digest;
    std::uint64_t sn = 0;
    ReplicaId author = 0;

    friend bool operator==(const MessageRef&, const MessageRef&) = default;
};

// Batches of each element in order: PoA batches first, then the optimistic
// sub-blocks up to the element prefix. Throws DataUnavailable if `has_batch`
// is given and reports some batch missing.
std::vector<MessageRef> messages_of(std::span<const BlockPrefix> chain, const BlockStore& store,
                                    const std::function<bool(const Digest&)>& has_batch = {});

// The references of a single element.
void append_messages(const Block& block, Prefix prefix, std::vector<MessageRef>& out);

}  // namespace raptr
