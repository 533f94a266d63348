// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "core/batch.hpp"
#include "core/certificates.hpp"

namespace raptr {

struct BlockPayload {
    std::vector<PoaPtr> poas;
    std::vector<std::vector<BatchInfo>> sub_blocks;

    static BlockPayload empty(std::uint32_t sub_blocks);
    bool has_optimistic() const;
    std::size_t batch_count() const;
};

// Sorts batches by (author, sn) and cuts them into M contiguous groups whose
// sizes differ by at most one; earlier groups take the remainder.
std::vector<std::vector<BatchInfo>> group_into_sub_blocks(std::vector<BatchInfo> batches, std::uint32_t sub_blocks);

class Block;
using BlockPtr = std::shared_ptr<const Block>;

class Block {
public:
    static BlockPtr make(Round round, EntryReason reason, BlockPayload payload);
    static BlockPtr genesis(std::uint32_t sub_blocks);
    static BlockPtr decode(Decoder& d, std::uint32_t availability);

    Round round() const noexcept { return round_; }
    bool is_genesis() const noexcept { return !reason_.has_value(); }
    const EntryReason& reason() const { return *reason_; }
    const QcPtr& qc_parent() const { return reason_->qc; }
    const BlockPayload& payload() const noexcept { return payload_; }
    const Digest& digest() const noexcept { return digest_; }

    // Exactly M sub-blocks and every batch referenced at most once.
    bool payload_well_formed(std::uint32_t sub_blocks) const;

    void encode(Encoder& e) const;

private:
    Block() = default;

    Round round_ = 0;
    std::optional<EntryReason> reason_;
    BlockPayload payload_;
    Digest digest_;
};

// Largest k such that every batch in sub-blocks 1..k is locally available.
Prefix available_prefix(const Block& block, const std::function<bool(const Digest&)>& has_batch);

}  // namespace raptr
