// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <map>
#include <random>

#include "sim/scenario.hpp"

namespace raptr::sim {

// Portable draws on top of mt19937_64, whose output sequence is fixed by the
// standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Inclusive range.
    SimTime uniform(SimTime lo, SimTime hi);
    bool bernoulli(double p) { return p > 0 && uniform01() < p; }
    double exponential(double mean);
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct Route {
    bool dropped = false;
    SimTime arrival = 0;
};

struct ChannelStats {
    std::uint64_t sent = 0;
    std::uint64_t dropped = 0;
    std::uint64_t bytes = 0;
};

class Network {
public:
    Network(const ScenarioConfig& scenario, std::uint64_t seed);

    Route route(ReplicaId from, ReplicaId to, Channel channel, std::size_t bytes, SimTime now);
    SimTime sample_delay(ReplicaId from, ReplicaId to, Channel channel);
    bool partitioned(ReplicaId from, ReplicaId to, SimTime now) const;
    double drop_rate(ReplicaId from, ReplicaId to, SimTime now) const;

    const std::array<ChannelStats, kChannelCount>& stats() const noexcept { return stats_; }
    std::uint64_t delta_violations() const noexcept { return delta_violations_; }
    void note_delta_violation() { ++delta_violations_; }

private:
    const ScenarioConfig& scenario_;
    Rng rng_;
    std::map<std::tuple<ReplicaId, ReplicaId, Channel>, SimTime> link_busy_;
    std::array<ChannelStats, kChannelCount> stats_{};
    std::uint64_t delta_violations_ = 0;
};

}  // namespace raptr::sim
