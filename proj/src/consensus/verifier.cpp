// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "consensus/verifier.hpp"

namespace raptr {

namespace {

bool verify_claims(const crypto::Signer& signer, const std::vector<std::vector<std::uint8_t>>& statements,
                   const std::vector<const crypto::PublicShare*>& shares, const AggregateSignature& sig) {
    std::vector<crypto::Claim> claims(statements.size());
    for (std::size_t i = 0; i < statements.size(); ++i) claims[i] = {shares[i], statements[i]};
    return signer.keys().scheme().verify_agg(claims, sig);
}

}  // namespace

CertVerifier::CertVerifier(const ProtocolConfig& config, const VariantPolicy& policy, const crypto::Signer& signer,
                           const Digest& genesis_block)
    : config_(config), policy_(policy), signer_(signer), genesis_block_(genesis_block) {}

bool CertVerifier::qc(const QuorumCertificate& c) {
    if (c.is_genesis()) return c.block() == genesis_block_;
    if (cached(c.id())) return true;
    if (c.votes().size() < config_.quorum_size) return false;
    std::vector<std::vector<std::uint8_t>> statements;
    std::vector<const crypto::PublicShare*> shares;
    for (const auto& v : c.votes()) {
        if (v.replica >= config_.n || v.prefix > config_.sub_blocks) return false;
        statements.push_back(qc_vote_statement(c.block(), c.round(), v.prefix));
        shares.push_back(&signer_.keys().pub(v.replica, v.prefix));
    }
    if (!verify_claims(signer_, statements, shares, c.signature())) return false;
    cache_->insert(c.id());
    return true;
}

bool CertVerifier::cc(const CommitCertificate& c) {
    if (cached(c.id())) return true;
    if (c.votes().size() < config_.quorum_size) return false;
    std::vector<std::vector<std::uint8_t>> statements;
    std::vector<const crypto::PublicShare*> shares;
    for (const auto& v : c.votes()) {
        if (v.replica >= config_.n || v.prefix > config_.sub_blocks) return false;
        statements.push_back(cc_vote_statement(c.block(), c.round(), v.prefix));
        shares.push_back(&signer_.keys().pub(v.replica, v.prefix));
    }
    if (!verify_claims(signer_, statements, shares, c.signature())) return false;
    cache_->insert(c.id());
    return true;
}

bool CertVerifier::tc(const TimeoutCertificate& c) {
    if (cached(c.id())) return true;
    if (c.votes().size() < config_.quorum_size) return false;
    std::vector<std::vector<std::uint8_t>> statements;
    std::vector<const crypto::PublicShare*> shares;
    for (const auto& v : c.votes()) {
        if (v.replica >= config_.n) return false;
        statements.push_back(tc_vote_statement(c.round(), v.rank.round, v.rank.prefix));
        shares.push_back(&signer_.keys().pub(v.replica, 0));
    }
    if (!verify_claims(signer_, statements, shares, c.signature())) return false;
    cache_->insert(c.id());
    return true;
}

bool CertVerifier::poa(const ProofOfAvailability& c) {
    if (cached(c.id())) return true;
    if (c.voters().size() < config_.quorum_size) return false;
    const auto& b = c.batch();
    const auto statement = poa_vote_statement(b.digest, b.sn, b.author);
    std::vector<std::vector<std::uint8_t>> statements;
    std::vector<const crypto::PublicShare*> shares;
    for (auto v : c.voters()) {
        if (v >= config_.n) return false;
        statements.push_back(statement);
        shares.push_back(&signer_.keys().pub(v, 0));
    }
    if (!verify_claims(signer_, statements, shares, c.signature())) return false;
    cache_->insert(c.id());
    return true;
}

bool CertVerifier::reason(const EntryReason& r) {
    if (!r.qc || !qc(*r.qc)) return false;
    if (r.kind == ReasonKind::kCommit && (!r.cc || !cc(*r.cc))) return false;
    if (r.kind == ReasonKind::kTimeout && (!r.tc || !tc(*r.tc))) return false;
    return entry_reason_consistent(r, config_.sub_blocks, policy_.rank_by_round_only());
}

bool CertVerifier::qc_vote(ReplicaId from, const QcVoteMsg& v) const {
    if (v.sig.signer != from || v.sig.tag != v.prefix || v.prefix > config_.sub_blocks) return false;
    return signer_.verify(from, v.prefix, qc_vote_statement(v.block, v.round, v.prefix), v.sig);
}

bool CertVerifier::cc_vote(ReplicaId from, const CcVoteMsg& v) const {
    const auto& q = *v.qc;
    if (v.sig.signer != from || v.sig.tag != q.prefix() || q.prefix() > config_.sub_blocks) return false;
    return signer_.verify(from, q.prefix(), cc_vote_statement(q.block(), q.round(), q.prefix()), v.sig);
}

bool CertVerifier::tc_vote(ReplicaId from, const TcVoteMsg& v) const {
    if (v.sig.signer != from || v.sig.tag != 0) return false;
    return signer_.verify(from, 0, tc_vote_statement(v.round, v.qc->round(), v.qc->prefix()), v.sig);
}

bool CertVerifier::poa_vote(ReplicaId from, const PoaVoteMsg& v, ReplicaId author) const {
    if (v.sig.signer != from || v.sig.tag != 0) return false;
    return signer_.verify(from, 0, poa_vote_statement(v.digest, v.sn, author), v.sig);
}

}  // namespace raptr
