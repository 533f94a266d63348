// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <string_view>

#include "consensus/messages.hpp"
#include "core/chain.hpp"

namespace raptr {

enum class TimerKind : std::uint8_t { kQcVote = 0, kRoundTimeout = 1, kFetchRetry = 2 };

struct TimerKey {
    TimerKind kind = TimerKind::kQcVote;
    std::uint64_t id = 0;

    friend auto operator<=>(const TimerKey&, const TimerKey&) = default;
};

// Everything a replica can do to the outside world.
class ReplicaEnv {
public:
    virtual ~ReplicaEnv() = default;

    virtual SimTime now() const = 0;
    virtual void send(ReplicaId to, MessagePtr msg) = 0;
    // To every replica, including the sender.
    virtual void multicast(MessagePtr msg) = 0;
    // Replaces any pending timer with the same key.
    virtual void set_timer(const TimerKey& key, SimTime delay) = 0;
    virtual void cancel_timer(const TimerKey& key) = 0;
};

// Hooks for the safety observer and metrics. All default to no-ops.
class ReplicaObserver {
public:
    virtual ~ReplicaObserver() = default;

    virtual void on_round_entered(ReplicaId, Round, const EntryReason&) {}
    virtual void on_proposed(ReplicaId, const BlockPtr&) {}
    virtual void on_qc_vote(ReplicaId, Round, Prefix, const Digest&) {}
    virtual void on_cc_vote(ReplicaId, const QcPtr&) {}
    virtual void on_tc_vote(ReplicaId, Round) {}
    virtual void on_qc(ReplicaId, const QcPtr&) {}
    virtual void on_qc_high(ReplicaId, const QcPtr&) {}
    virtual void on_tc_formed(ReplicaId, const TcPtr&) {}
    virtual void on_commit(ReplicaId, const QcPtr&) {}
    virtual void on_deliver(ReplicaId, const MessageRef&, const BatchPtr&, Round) {}
    virtual void on_batch_created(ReplicaId, const BatchPtr&) {}
    virtual void on_batch_includable(ReplicaId, const Digest&, SimTime) {}
    virtual void on_fetch_request(ReplicaId, std::size_t) {}
    virtual void on_rejected(ReplicaId, ReplicaId, std::string_view) {}
};

}  // namespace raptr
