// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "crypto/nias.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

#include "core/codec.hpp"
#include "core/errors.hpp"

namespace raptr::crypto {

namespace {

Digest derive_seed(std::string_view domain, std::uint64_t seed, ReplicaId signer, std::uint32_t tag) {
    Encoder e;
    e.str(domain).u64(seed).u32(signer).u32(tag);
    return e.hash();
}

bool distinct_signers(std::vector<ReplicaId> ids) {
    std::sort(ids.begin(), ids.end());
    return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

// Insecure: the public share equals the MAC key. Only for simulation, where
// signatures are never attacked cryptographically.
class KeyedHashScheme final : public Nias {
public:
    static constexpr std::size_t kMacSize = crypto_shorthash_siphashx24_BYTES;

    SchemeKind kind() const noexcept override { return SchemeKind::kKeyedHash; }

    void keygen(std::uint64_t seed, ReplicaId signer, std::uint32_t tag, SecretShare& sk,
                PublicShare& pk) const override {
        auto d = derive_seed("keyed-hash", seed, signer, tag);
        sk = {signer, tag, Bytes(d.bytes.begin(), d.bytes.begin() + crypto_shorthash_siphashx24_KEYBYTES)};
        pk = {signer, tag, sk.key};
    }

    PartialSignature psign(const SecretShare& sk, std::span<const std::uint8_t> message) const override {
        PartialSignature s{sk.signer, sk.tag, Bytes(kMacSize)};
        mac(sk.key, message, s.bytes.data());
        return s;
    }

    bool pver(const PublicShare& pk, std::span<const std::uint8_t> message,
              const PartialSignature& sig) const override {
        if (sig.signer != pk.signer || sig.tag != pk.tag || sig.bytes.size() != kMacSize) return false;
        std::uint8_t expect[kMacSize];
        mac(pk.key, message, expect);
        return sodium_memcmp(expect, sig.bytes.data(), kMacSize) == 0;
    }

    std::optional<AggregateSignature> combine(std::span<const PartialSignature> partials) const override {
        if (partials.empty()) return std::nullopt;
        std::vector<ReplicaId> ids;
        AggregateSignature agg{Bytes(kMacSize, 0)};
        for (const auto& p : partials) {
            if (p.bytes.size() != kMacSize) return std::nullopt;
            ids.push_back(p.signer);
            for (std::size_t i = 0; i < kMacSize; ++i) agg.bytes[i] ^= p.bytes[i];
        }
        if (!distinct_signers(std::move(ids))) return std::nullopt;
        return agg;
    }

    bool verify_agg(std::span<const Claim> claims, const AggregateSignature& sig) const override {
        if (claims.empty() || sig.bytes.size() != kMacSize) return false;
        std::vector<ReplicaId> ids;
        std::uint8_t acc[kMacSize] = {};
        std::uint8_t one[kMacSize];
        for (const auto& c : claims) {
            if (!c.share) return false;
            ids.push_back(c.share->signer);
            mac(c.share->key, c.message, one);
            for (std::size_t i = 0; i < kMacSize; ++i) acc[i] ^= one[i];
        }
        if (!distinct_signers(std::move(ids))) return false;
        return sodium_memcmp(acc, sig.bytes.data(), kMacSize) == 0;
    }

private:
    static void mac(const Bytes& key, std::span<const std::uint8_t> message, std::uint8_t* out) {
        crypto_shorthash_siphashx24(out, message.data(), message.size(), key.data());
    }
};

// Aggregate is the signer-ordered concatenation of (signer, tag, signature).
class Ed25519Scheme final : public Nias {
public:
    static constexpr std::size_t kSigSize = crypto_sign_BYTES;
    static constexpr std::size_t kEntrySize = 8 + kSigSize;

    SchemeKind kind() const noexcept override { return SchemeKind::kEd25519; }

    void keygen(std::uint64_t seed, ReplicaId signer, std::uint32_t tag, SecretShare& sk,
                PublicShare& pk) const override {
        auto d = derive_seed("ed25519", seed, signer, tag);
        sk = {signer, tag, Bytes(crypto_sign_SECRETKEYBYTES)};
        pk = {signer, tag, Bytes(crypto_sign_PUBLICKEYBYTES)};
        crypto_sign_seed_keypair(pk.key.data(), sk.key.data(), d.bytes.data());
    }

    PartialSignature psign(const SecretShare& sk, std::span<const std::uint8_t> message) const override {
        PartialSignature s{sk.signer, sk.tag, Bytes(kSigSize)};
        crypto_sign_detached(s.bytes.data(), nullptr, message.data(), message.size(), sk.key.data());
        return s;
    }

    bool pver(const PublicShare& pk, std::span<const std::uint8_t> message,
              const PartialSignature& sig) const override {
        if (sig.signer != pk.signer || sig.tag != pk.tag || sig.bytes.size() != kSigSize) return false;
        return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(), pk.key.data()) == 0;
    }

    std::optional<AggregateSignature> combine(std::span<const PartialSignature> partials) const override {
        if (partials.empty()) return std::nullopt;
        std::vector<const PartialSignature*> sorted;
        for (const auto& p : partials) {
            if (p.bytes.size() != kSigSize) return std::nullopt;
            sorted.push_back(&p);
        }
        std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->signer < b->signer; });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i]->signer == sorted[i - 1]->signer) return std::nullopt;
        Encoder e;
        for (auto* p : sorted) {
            e.u32(p->signer).u32(p->tag);
            for (auto b : p->bytes) e.u8(b);
        }
        return AggregateSignature{std::move(e).take()};
    }

    bool verify_agg(std::span<const Claim> claims, const AggregateSignature& sig) const override {
        if (claims.empty() || sig.bytes.size() != claims.size() * kEntrySize) return false;
        std::vector<const Claim*> sorted;
        for (const auto& c : claims) {
            if (!c.share) return false;
            sorted.push_back(&c);
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](auto* a, auto* b) { return a->share->signer < b->share->signer; });
        Decoder d(sig.bytes);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const auto& c = *sorted[i];
            if (i > 0 && sorted[i - 1]->share->signer == c.share->signer) return false;
            if (d.u32() != c.share->signer || d.u32() != c.share->tag) return false;
            const auto* s = sig.bytes.data() + i * kEntrySize + 8;
            if (crypto_sign_verify_detached(s, c.message.data(), c.message.size(), c.share->key.data()) != 0)
                return false;
            for (std::size_t k = 0; k < kSigSize; ++k) d.u8();
        }
        return true;
    }
};

}  // namespace

std::string_view to_string(SchemeKind k) {
    return k == SchemeKind::kEd25519 ? "ed25519" : "keyed-hash";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    if (name == "keyed-hash") return SchemeKind::kKeyedHash;
    if (name == "ed25519") return SchemeKind::kEd25519;
    return std::nullopt;
}

std::shared_ptr<const Nias> make_scheme(SchemeKind kind) {
    if (sodium_init() < 0) throw Error("libsodium initialisation failed");
    if (kind == SchemeKind::kEd25519) return std::make_shared<Ed25519Scheme>();
    return std::make_shared<KeyedHashScheme>();
}

KeyShareSet::KeyShareSet(std::shared_ptr<const Nias> scheme, std::uint32_t n, std::uint32_t max_tag,
                         std::uint64_t seed)
    : scheme_(std::move(scheme)), n_(n), max_tag_(max_tag) {
    const std::size_t total = static_cast<std::size_t>(n) * (max_tag + 1);
    secrets_.resize(total);
    publics_.resize(total);
    for (ReplicaId i = 0; i < n; ++i)
        for (std::uint32_t t = 0; t <= max_tag; ++t) {
            const auto at = static_cast<std::size_t>(i) * (max_tag + 1) + t;
            scheme_->keygen(seed, i, t, secrets_[at], publics_[at]);
        }
}

const SecretShare& KeyShareSet::secret(ReplicaId signer, std::uint32_t tag) const {
    if (signer >= n_ || tag > max_tag_) throw std::out_of_range("key share index");
    return secrets_[static_cast<std::size_t>(signer) * (max_tag_ + 1) + tag];
}

const PublicShare& KeyShareSet::pub(ReplicaId signer, std::uint32_t tag) const {
    if (signer >= n_ || tag > max_tag_) throw std::out_of_range("key share index");
    return publics_[static_cast<std::size_t>(signer) * (max_tag_ + 1) + tag];
}

PartialSignature Signer::sign(std::uint32_t tag, std::span<const std::uint8_t> message) const {
    return keys_->scheme().psign(keys_->secret(self_, tag), message);
}

bool Signer::verify(ReplicaId signer, std::uint32_t tag, std::span<const std::uint8_t> message,
                    const PartialSignature& sig) const {
    if (signer >= keys_->n() || tag > keys_->max_tag()) return false;
    return keys_->scheme().pver(keys_->pub(signer, tag), message, sig);
}

std::optional<AggregateSignature> Signer::combine(std::span<const PartialSignature> partials) const {
    return keys_->scheme().combine(partials);
}

}  // namespace raptr::crypto
