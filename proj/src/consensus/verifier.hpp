// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <unordered_set>

#include "consensus/messages.hpp"
#include "consensus/variant.hpp"
#include "crypto/nias.hpp"

namespace raptr {

using VerifiedSet = std::unordered_set<Digest, DigestHash>;

// Certificate checks with a cache of already verified certificate ids.
class CertVerifier {
public:
    CertVerifier(const ProtocolConfig& config, const VariantPolicy& policy, const crypto::Signer& signer,
                 const Digest& genesis_block);

    bool qc(const QuorumCertificate& c);
    bool cc(const CommitCertificate& c);
    bool tc(const TimeoutCertificate& c);
    bool poa(const ProofOfAvailability& c);
    bool reason(const EntryReason& r);

    bool qc_vote(ReplicaId from, const QcVoteMsg& v) const;
    bool cc_vote(ReplicaId from, const CcVoteMsg& v) const;
    bool tc_vote(ReplicaId from, const TcVoteMsg& v) const;
    bool poa_vote(ReplicaId from, const PoaVoteMsg& v, ReplicaId author) const;

    std::size_t cache_size() const noexcept { return cache_->size(); }
    // Verifiers with identical keys and configuration may pool their cache.
    void share_cache(std::shared_ptr<VerifiedSet> cache) { cache_ = std::move(cache); }

private:
    bool cached(const Digest& id) const { return cache_->count(id) != 0; }

    const ProtocolConfig& config_;
    const VariantPolicy& policy_;
    const crypto::Signer& signer_;
    Digest genesis_block_;
    std::shared_ptr<VerifiedSet> cache_ = std::make_shared<VerifiedSet>();
};

}  // namespace raptr
