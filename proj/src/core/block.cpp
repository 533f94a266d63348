// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/block.hpp"

#include <algorithm>
#include <unordered_set>

#include "core/errors.hpp"

namespace raptr {

BlockPayload BlockPayload::empty(std::uint32_t sub_blocks) {
    BlockPayload p;
    p.sub_blocks.resize(sub_blocks);
    return p;
}

bool BlockPayload::has_optimistic() const {
    for (const auto& s : sub_blocks)
        if (!s.empty()) return true;
    return false;
}

std::size_t BlockPayload::batch_count() const {
    std::size_t n = poas.size();
    for (const auto& s : sub_blocks) n += s.size();
    return n;
}

std::vector<std::vector<BatchInfo>> group_into_sub_blocks(std::vector<BatchInfo> batches, std::uint32_t sub_blocks) {
    std::sort(batches.begin(), batches.end(), [](const BatchInfo& a, const BatchInfo& b) {
        if (a.author != b.author) return a.author < b.author;
        if (a.sn != b.sn) return a.sn < b.sn;
        return a.digest < b.digest;
    });
    std::vector<std::vector<BatchInfo>> groups(sub_blocks);
    const std::size_t base = batches.size() / sub_blocks;
    const std::size_t extra = batches.size() % sub_blocks;
    std::size_t at = 0;
    for (std::size_t g = 0; g < sub_blocks; ++g) {
        const std::size_t len = base + (g < extra ? 1 : 0);
        groups[g].assign(batches.begin() + at, batches.begin() + at + len);
        at += len;
    }
    return groups;
}

namespace {

void encode_payload(Encoder& e, const BlockPayload& p) {
    e.nested([&](Encoder& b) {
        b.u32(static_cast<std::uint32_t>(p.poas.size()));
        for (const auto& poa : p.poas) poa->encode(b);
        b.u32(static_cast<std::uint32_t>(p.sub_blocks.size()));
        for (const auto& sub : p.sub_blocks) {
            b.u32(static_cast<std::uint32_t>(sub.size()));
            for (const auto& info : sub) info.encode(b);
        }
    });
}

BlockPayload decode_payload(Decoder& outer) {
    auto d = outer.nested();
    BlockPayload p;
    p.poas.resize(d.count(4));
    for (auto& poa : p.poas) poa = ProofOfAvailability::decode(d);
    p.sub_blocks.resize(d.count(4));
    for (auto& sub : p.sub_blocks) {
        sub.resize(d.count(4));
        for (auto& info : sub) info = BatchInfo::decode(d);
    }
    d.expect_done();
    return p;
}

}  // namespace

BlockPtr Block::make(Round round, EntryReason reason, BlockPayload payload) {
    if (!reason.qc) throw MalformedCertificate("block: entry reason without qc");
    auto b = std::shared_ptr<Block>(new Block());
    b->round_ = round;
    b->reason_ = std::move(reason);
    b->payload_ = std::move(payload);
    Encoder e;
    b->encode(e);
    b->digest_ = e.hash();
    return b;
}

BlockPtr Block::genesis(std::uint32_t sub_blocks) {
    auto b = std::shared_ptr<Block>(new Block());
    b->payload_ = BlockPayload::empty(sub_blocks);
    Encoder e;
    b->encode(e);
    b->digest_ = e.hash();
    return b;
}

void Block::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("block").u64(round_).boolean(reason_.has_value());
        if (reason_) reason_->encode(b);
        encode_payload(b, payload_);
    });
}

BlockPtr Block::decode(Decoder& outer, std::uint32_t availability) {
    auto d = outer.nested();
    if (d.str() != "block") throw DecodeError("expected block");
    const Round round = d.u64();
    const bool has_reason = d.boolean();
    std::optional<EntryReason> reason;
    if (has_reason) reason = EntryReason::decode(d, availability);
    auto payload = decode_payload(d);
    d.expect_done();
    if (!reason) {
        if (round != 0 || !payload.poas.empty() || payload.has_optimistic()) throw DecodeError("malformed genesis");
        return genesis(static_cast<std::uint32_t>(payload.sub_blocks.size()));
    }
    return make(round, std::move(*reason), std::move(payload));
}

bool Block::payload_well_formed(std::uint32_t sub_blocks) const {
    if (payload_.sub_blocks.size() != sub_blocks) return false;
    std::unordered_set<Digest, DigestHash> seen;
    seen.reserve(payload_.batch_count());
    for (const auto& poa : payload_.poas) {
        if (!poa) return false;
        if (!seen.insert(poa->batch().digest).second) return false;
    }
    for (const auto& sub : payload_.sub_blocks)
        for (const auto& info : sub)
            if (!seen.insert(info.digest).second) return false;
    return true;
}

Prefix available_prefix(const Block& block, const std::function<bool(const Digest&)>& has_batch) {
    const auto& subs = block.payload().sub_blocks;
    for (std::size_t k = 0; k < subs.size(); ++k)
        for (const auto& info : subs[k])
            if (!has_batch(info.digest)) return static_cast<Prefix>(k);
    return static_cast<Prefix>(subs.size());
}

}  // namespace raptr
