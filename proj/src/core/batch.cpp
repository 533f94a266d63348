// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/batch.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace raptr {

void BatchInfo::encode(Encoder& e) const {
    e.nested([&](Encoder& b) { b.digest(digest).u64(sn).u32(author).i64(created_at); });
}

BatchInfo BatchInfo::decode(Decoder& outer) {
    auto d = outer.nested();
    BatchInfo i;
    i.digest = d.digest();
    i.sn = d.u64();
    i.author = d.u32();
    i.created_at = d.i64();
    d.expect_done();
    return i;
}

Digest Batch::compute_digest(ReplicaId author, std::uint64_t sn, const std::vector<TxId>& txs,
                             std::uint32_t tx_bytes) {
    Encoder e;
    e.str("batch").u32(author).u64(sn).u32(tx_bytes).u32(static_cast<std::uint32_t>(txs.size()));
    for (auto t : txs) e.u64(t);
    return e.hash();
}

BatchPtr Batch::make(ReplicaId author, std::uint64_t sn, SimTime created_at, std::vector<TxId> txs,
                     std::uint32_t tx_bytes) {
    auto d = compute_digest(author, sn, txs, tx_bytes);
    return make_unchecked(author, sn, created_at, std::move(txs), tx_bytes, d);
}

BatchPtr Batch::make_unchecked(ReplicaId author, std::uint64_t sn, SimTime created_at, std::vector<TxId> txs,
                               std::uint32_t tx_bytes, const Digest& digest) {
    auto b = std::shared_ptr<Batch>(new Batch());
    b->author_ = author;
    b->sn_ = sn;
    b->created_at_ = created_at;
    b->txs_ = std::move(txs);
    b->tx_bytes_ = tx_bytes;
    b->digest_ = digest;
    return b;
}

bool Batch::digest_valid() const {
    if (validity_ == 0) validity_ = compute_digest(author_, sn_, txs_, tx_bytes_) == digest_ ? 1 : 2;
    return validity_ == 1;
}

void Batch::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("batch").u32(author_).u64(sn_).i64(created_at_).u32(tx_bytes_);
        b.u32(static_cast<std::uint32_t>(txs_.size()));
        for (auto t : txs_) b.u64(t);
        b.digest(digest_);
    });
}

BatchPtr Batch::decode(Decoder& outer) {
    auto d = outer.nested();
    if (d.str() != "batch") throw DecodeError("expected batch");
    const ReplicaId author = d.u32();
    const auto sn = d.u64();
    const auto created = d.i64();
    const auto tx_bytes = d.u32();
    std::vector<TxId> txs(d.count(8));
    for (auto& t : txs) t = d.u64();
    const auto digest = d.digest();
    d.expect_done();
    return make_unchecked(author, sn, created, std::move(txs), tx_bytes, digest);
}

PoaPtr ProofOfAvailability::make(const BatchInfo& batch, std::vector<ReplicaId> voters,
                                 AggregateSignature signature) {
    if (voters.empty()) throw MalformedCertificate("poa: no voters");
    std::sort(voters.begin(), voters.end());
    if (std::adjacent_find(voters.begin(), voters.end()) != voters.end())
        throw MalformedCertificate("poa: duplicate voter");
    auto p = std::shared_ptr<ProofOfAvailability>(new ProofOfAvailability());
    p->batch_ = batch;
    p->voters_ = std::move(voters);
    p->signature_ = std::move(signature);
    Encoder e;
    p->encode(e);
    p->id_ = e.hash();
    return p;
}

void ProofOfAvailability::encode(Encoder& e) const {
    e.nested([&](Encoder& b) {
        b.str("poa");
        batch_.encode(b);
        b.u32(static_cast<std::uint32_t>(voters_.size()));
        for (auto v : voters_) b.u32(v);
        b.bytes(signature_.bytes);
    });
}

PoaPtr ProofOfAvailability::decode(Decoder& outer) {
    auto d = outer.nested();
    if (d.str() != "poa") throw DecodeError("expected poa");
    auto info = BatchInfo::decode(d);
    std::vector<ReplicaId> voters(d.count(4));
    for (std::size_t i = 0; i < voters.size(); ++i) {
        voters[i] = d.u32();
        if (i > 0 && voters[i] <= voters[i - 1]) throw DecodeError("voters out of canonical order");
    }
    AggregateSignature sig{d.bytes()};
    d.expect_done();
    try {
        return make(info, std::move(voters), std::move(sig));
    } catch (const MalformedCertificate& e) {
        throw DecodeError(e.what());
    }
}

}  // namespace raptr
