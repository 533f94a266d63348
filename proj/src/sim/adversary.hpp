// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <vector>

#include "consensus/replica.hpp"
#include "sim/network.hpp"

namespace raptr::sim {

// What a Byzantine node can do with the messages its inner honest core emits.
class AdversaryContext {
public:
    virtual ~AdversaryContext() = default;
    virtual ReplicaId self() const = 0;
    virtual std::uint32_t n() const = 0;
    virtual const Replica& core() const = 0;
    virtual Rng& rng() = 0;
    virtual void emit(ReplicaId to, MessagePtr msg) = 0;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual void outgoing(AdversaryContext& ctx, const std::vector<ReplicaId>& to, const MessagePtr& msg);
    virtual void incoming(AdversaryContext&, ReplicaId /*from*/, const MessagePtr&) {}
};

std::unique_ptr<Adversary> make_adversary(const FaultSpec& fault);

}  // namespace raptr::sim
