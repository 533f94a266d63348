// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

// Reference implementations used by the tests. They share no code with the
// library beyond the plain data types.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/block.hpp"
#include "core/certificates.hpp"
#include "core/chain.hpp"

namespace raptr::oracle {

// Sort descending and read position S-1; nullopt when fewer than S votes.
inline std::optional<Prefix> certified_prefix(std::vector<Prefix> prefixes, std::uint32_t s) {
    if (s == 0 || prefixes.size() < s) return std::nullopt;
    std::sort(prefixes.begin(), prefixes.end(), std::greater<>());
    return prefixes[s - 1];
}

// Every non-decreasing sequence over [0, max_prefix] with length in [1, max_size].
inline std::vector<std::vector<Prefix>> vote_multisets(std::size_t max_size, Prefix max_prefix) {
    std::vector<std::vector<Prefix>> out;
    std::vector<Prefix> cur;
    std::function<void(Prefix)> grow = [&](Prefix lo) {
        if (!cur.empty()) out.push_back(cur);
        if (cur.size() == max_size) return;
        for (Prefix p = lo; p <= max_prefix; ++p) {
            cur.push_back(p);
            grow(p);
            cur.pop_back();
        }
    };
    grow(0);
    return out;
}

// 64-bit FNV-1a, for freezing oracle outputs.
struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void add(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
};

// One entry per certified unit of a chain: a marker for each block, then one
// per certified sub-block with its batch digests.
struct Unit {
    Digest block;
    std::uint32_t sub = 0;
    std::vector<Digest> batches;

    friend bool operator==(const Unit&, const Unit&) = default;
};

// Walks parent certificates directly, genesis first. nullopt if a block is
// missing from `blocks`.
inline std::optional<std::vector<Unit>> message_sequence(const QuorumCertificate& qc,
                                                         const std::function<const Block*(const Digest&)>& blocks) {
    std::vector<std::vector<Unit>> per_block;
    Digest at = qc.block();
    Prefix prefix = qc.prefix();
    for (;;) {
        const Block* b = blocks(at);
        if (!b) return std::nullopt;
        std::vector<Unit> units;
        Unit head{at, 0, {}};
        for (const auto& p : b->payload().poas) head.batches.push_back(p->batch().digest);
        units.push_back(std::move(head));
        const auto& subs = b->payload().sub_blocks;
        for (Prefix k = 0; k < prefix && k < subs.size(); ++k) {
            Unit u{at, k + 1, {}};
            for (const auto& i : subs[k]) u.batches.push_back(i.digest);
            units.push_back(std::move(u));
        }
        per_block.push_back(std::move(units));
        if (b->is_genesis()) break;
        at = b->qc_parent()->block();
        prefix = b->qc_parent()->prefix();
    }
    std::vector<Unit> seq;
    for (auto it = per_block.rbegin(); it != per_block.rend(); ++it) seq.insert(seq.end(), it->begin(), it->end());
    return seq;
}

inline bool sequence_prefix(const std::vector<Unit>& a, const std::vector<Unit>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace raptr::oracle
