// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/variant.hpp"

namespace raptr {

bool VariantPolicy::optimistic_payload(const EntryReason& reason) const {
    switch (variant_) {
        case Variant::kRaptr: return true;
        case Variant::kBabyRaptr: return reason.kind != ReasonKind::kTimeout;
        case Variant::kBaselineQs: return false;
    }
    return false;
}

int VariantPolicy::compare(const Rank& a, const Rank& b) const {
    if (a.round != b.round) return a.round < b.round ? -1 : 1;
    if (rank_by_round_only() || a.prefix == b.prefix) return 0;
    return a.prefix < b.prefix ? -1 : 1;
}

int VariantPolicy::compare(const QuorumCertificate& a, const QuorumCertificate& b) const {
    return compare(a.rank(), b.rank());
}

}  // namespace raptr
