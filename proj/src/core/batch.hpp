// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <vector>

#include "core/codec.hpp"
#include "core/digest.hpp"
#include "core/types.hpp"

namespace raptr {

struct BatchInfo {
    Digest digest;
    std::uint64_t sn = 0;
    ReplicaId author = 0;
    SimTime created_at = 0;

    friend auto operator<=>(const BatchInfo&, const BatchInfo&) = default;

    void encode(Encoder& e) const;
    static BatchInfo decode(Decoder& d);
};

class Batch;
using BatchPtr = std::shared_ptr<const Batch>;

class Batch {
public:
    static BatchPtr make(ReplicaId author, std::uint64_t sn, SimTime created_at, std::vector<TxId> txs,
                         std::uint32_t tx_bytes);
    // Builds a batch whose stored digest is taken as given; receivers detect
    // a mismatch with digest_valid().
    static BatchPtr make_unchecked(ReplicaId author, std::uint64_t sn, SimTime created_at,
                                   std::vector<TxId> txs, std::uint32_t tx_bytes, const Digest& digest);
    static Digest compute_digest(ReplicaId author, std::uint64_t sn, const std::vector<TxId>& txs,
                                 std::uint32_t tx_bytes);
    static BatchPtr decode(Decoder& d);

    ReplicaId author() const noexcept { return author_; }
    std::uint64_t sn() const noexcept { return sn_; }
    SimTime created_at() const noexcept { return created_at_; }
    const std::vector<TxId>& txs() const noexcept { return txs_; }
    std::uint32_t tx_bytes() const noexcept { return tx_bytes_; }
    const Digest& digest() const noexcept { return digest_; }
    bool digest_valid() const;
    BatchInfo info() const { return {digest_, sn_, author_, created_at_}; }
    std::size_t payload_bytes() const noexcept { return txs_.size() * static_cast<std::size_t>(tx_bytes_); }

    void encode(Encoder& e) const;

private:
    Batch() = default;

    ReplicaId author_ = 0;
    std::uint64_t sn_ = 0;
    SimTime created_at_ = 0;
    std::vector<TxId> txs_;
    std::uint32_t tx_bytes_ = 0;
    Digest digest_;
    // 0 unknown, 1 valid, 2 invalid. The object is immutable, so the check
    // result never changes.
    mutable std::uint8_t validity_ = 0;
};

class ProofOfAvailability;
using PoaPtr = std::shared_ptr<const ProofOfAvailability>;

class ProofOfAvailability {
public:
    static PoaPtr make(const BatchInfo& batch, std::vector<ReplicaId> voters, AggregateSignature signature);
    static PoaPtr decode(Decoder& d);

    const BatchInfo& batch() const noexcept { return batch_; }
    const std::vector<ReplicaId>& voters() const noexcept { return voters_; }
    const AggregateSignature& signature() const noexcept { return signature_; }
    const Digest& id() const noexcept { return id_; }

    void encode(Encoder& e) const;

private:
    ProofOfAvailability() = default;

    BatchInfo batch_;
    std::vector<ReplicaId> voters_;
    AggregateSignature signature_;
    Digest id_;
};

}  // namespace raptr
