// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "core/certificates.hpp"
#include "core/types.hpp"

namespace raptr {

// The knobs that distinguish RAPTR, BABY_RAPTR and BASELINE_QS. The replica
// consults these and nothing else about its variant.
class VariantPolicy {
public:
    explicit VariantPolicy(Variant v) : variant_(v) {}

    Variant variant() const noexcept { return variant_; }

    // Whether a block entered through `reason` may carry batches without PoA.
    bool optimistic_payload(const EntryReason& reason) const;
    // Whether replicas may vote for a strict prefix of the block.
    bool partial_votes() const noexcept { return variant_ == Variant::kRaptr; }
    // Whether the εΔ timer triggers a vote before all data is available.
    bool vote_timer() const noexcept { return variant_ == Variant::kRaptr; }
    // Baseline QCs are totally ordered by round alone.
    bool rank_by_round_only() const noexcept { return variant_ == Variant::kBaselineQs; }
    // Blocks must not carry optimistic batches.
    bool poa_only_blocks() const noexcept { return variant_ == Variant::kBaselineQs; }

    int compare(const Rank& a, const Rank& b) const;
    int compare(const QuorumCertificate& a, const QuorumCertificate& b) const;

private:
    Variant variant_;
};

}  // namespace raptr
