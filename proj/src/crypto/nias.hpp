// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace raptr::crypto {

// Non-interactive aggregate signatures with per-signer tags in [0, M].
// psign/pver operate on one (signer, tag) share; combine folds partial
// signatures from distinct signers; verify_agg checks a set of claims.

using Bytes = std::vector<std::uint8_t>;

struct SecretShare {
    ReplicaId signer = 0;
    std::uint32_t tag = 0;
    Bytes key;
};

struct PublicShare {
    ReplicaId signer = 0;
    std::uint32_t tag = 0;
    Bytes key;
};

struct Claim {
    const PublicShare* share = nullptr;
    std::span<const std::uint8_t> message;
};

enum class SchemeKind : std::uint8_t { kKeyedHash, kEd25519 };

std::string_view to_string(SchemeKind k);
std::optional<SchemeKind> parse_scheme(std::string_view name);

class Nias {
public:
    virtual ~Nias() = default;

    virtual SchemeKind kind() const noexcept = 0;
    virtual void keygen(std::uint64_t seed, ReplicaId signer, std::uint32_t tag, SecretShare& sk,
                        PublicShare& pk) const = 0;
    virtual PartialSignature psign(const SecretShare& sk, std::span<const std::uint8_t> message) const = 0;
    virtual bool pver(const PublicShare& pk, std::span<const std::uint8_t> message,
                      const PartialSignature& sig) const = 0;
    // nullopt on an empty set or a repeated signer.
    virtual std::optional<AggregateSignature> combine(std::span<const PartialSignature> partials) const = 0;
    virtual bool verify_agg(std::span<const Claim> claims, const AggregateSignature& sig) const = 0;
};

std::shared_ptr<const Nias> make_scheme(SchemeKind kind);

// Key shares for n signers and tags 0..max_tag, derived from a seed.
class KeyShareSet {
public:
    KeyShareSet(std::shared_ptr<const Nias> scheme, std::uint32_t n, std::uint32_t max_tag, std::uint64_t seed);

    const Nias& scheme() const noexcept { return *scheme_; }
    std::uint32_t n() const noexcept { return n_; }
    std::uint32_t max_tag() const noexcept { return max_tag_; }
    const SecretShare& secret(ReplicaId signer, std::uint32_t tag) const;
    const PublicShare& pub(ReplicaId signer, std::uint32_t tag) const;

private:
    std::shared_ptr<const Nias> scheme_;
    std::uint32_t n_;
    std::uint32_t max_tag_;
    std::vector<SecretShare> secrets_;
    std::vector<PublicShare> publics_;
};

// What a replica can do with keys: sign with its own shares, verify anyone.
class Signer {
public:
    Signer(std::shared_ptr<const KeyShareSet> keys, ReplicaId self) : keys_(std::move(keys)), self_(self) {}

    ReplicaId self() const noexcept { return self_; }
    PartialSignature sign(std::uint32_t tag, std::span<const std::uint8_t> message) const;
    bool verify(ReplicaId signer, std::uint32_t tag, std::span<const std::uint8_t> message,
                const PartialSignature& sig) const;
    std::optional<AggregateSignature> combine(std::span<const PartialSignature> partials) const;
    const KeyShareSet& keys() const noexcept { return *keys_; }

private:
    std::shared_ptr<const KeyShareSet> keys_;
    ReplicaId self_;
};

}  // namespace raptr::crypto
