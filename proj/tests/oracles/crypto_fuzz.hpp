// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <random>
#include <vector>

#include "crypto/nias.hpp"

namespace raptr::fuzz {

struct MutationResult {
    std::size_t cases = 0;
    std::size_t valid_accepted = 0;
    std::size_t mutants_rejected = 0;
    // Mutations applied to signer, prefix tag and message.
    std::array<std::size_t, 3> by_field{};
};

// Each case signs a random claim set (1 to 7 distinct signers of 10, tags in
// 0..4, random messages), checks that it verifies, then changes exactly one
// field of one claim and checks that verification fails.
inline MutationResult run_mutation_fuzz(crypto::SchemeKind kind, std::size_t cases, std::uint64_t seed) {
    constexpr std::uint32_t kN = 10;
    constexpr std::uint32_t kMaxTag = 4;
    crypto::KeyShareSet keys(crypto::make_scheme(kind), kN, kMaxTag, seed);
    const auto& nias = keys.scheme();
    std::mt19937_64 rng(seed);
    MutationResult r;
    for (std::size_t c = 0; c < cases; ++c) {
        std::vector<ReplicaId> ids(kN);
        for (ReplicaId i = 0; i < kN; ++i) ids[i] = i;
        std::shuffle(ids.begin(), ids.end(), rng);
        ids.resize(1 + rng() % 7);

        std::vector<std::vector<std::uint8_t>> msgs;
        std::vector<std::uint32_t> tags;
        std::vector<PartialSignature> partials;
        for (auto id : ids) {
            std::vector<std::uint8_t> m(1 + rng() % 40);
            for (auto& b : m) b = static_cast<std::uint8_t>(rng());
            tags.push_back(static_cast<std::uint32_t>(rng() % (kMaxTag + 1)));
            partials.push_back(nias.psign(keys.secret(id, tags.back()), m));
            msgs.push_back(std::move(m));
        }
        auto agg = nias.combine(partials);
        if (!agg) continue;
        std::vector<crypto::Claim> claims;
        for (std::size_t i = 0; i < ids.size(); ++i) claims.push_back({&keys.pub(ids[i], tags[i]), msgs[i]});
        ++r.cases;
        if (nias.verify_agg(claims, *agg)) ++r.valid_accepted;

        const std::size_t victim = rng() % ids.size();
        const auto field = static_cast<std::size_t>(rng() % 3);
        ++r.by_field[field];
        std::vector<std::uint8_t> changed = msgs[victim];
        switch (field) {
            case 0: {
                ReplicaId other = static_cast<ReplicaId>(rng() % (kN - 1));
                if (other >= ids[victim]) ++other;
                claims[victim].share = &keys.pub(other, tags[victim]);
                break;
            }
            case 1: {
                auto other = static_cast<std::uint32_t>(rng() % kMaxTag);
                if (other >= tags[victim]) ++other;
                claims[victim].share = &keys.pub(ids[victim], other);
                break;
            }
            default: {
                switch (rng() % 3) {
                    case 0: changed[rng() % changed.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255); break;
                    case 1: changed.push_back(static_cast<std::uint8_t>(rng())); break;
                    default: changed.pop_back(); break;
                }
                claims[victim].message = changed;
                break;
            }
        }
        if (!nias.verify_agg(claims, *agg)) ++r.mutants_rejected;
    }
    return r;
}

}  // namespace raptr::fuzz
