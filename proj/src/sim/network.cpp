// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "sim/network.hpp"

#include <algorithm>
#include <cmath>

namespace raptr::sim {

SimTime Rng::uniform(SimTime lo, SimTime hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<SimTime>(next() % span);
}

double Rng::exponential(double mean) {
    double u = uniform01();
    if (u <= 0) u = 0x1.0p-53;
    return -std::log(u) * mean;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Network::Network(const ScenarioConfig& scenario, std::uint64_t seed) : scenario_(scenario), rng_(seed) {}

SimTime Network::sample_delay(ReplicaId from, ReplicaId to, Channel channel) {
    const auto& d = scenario_.network.delay_for(channel);
    switch (d.kind) {
        case DelaySpec::Kind::kFixed: return d.value;
        case DelaySpec::Kind::kUniform: return rng_.uniform(d.lo, d.hi);
        case DelaySpec::Kind::kRegions: {
            const auto base = d.matrix[d.regions[from]][d.regions[to]];
            return base + (d.jitter > 0 ? rng_.uniform(0, d.jitter) : 0);
        }
    }
    return d.value;
}

bool Network::partitioned(ReplicaId from, ReplicaId to, SimTime now) const {
    for (const auto& f : scenario_.faults) {
        if (f.kind != FaultKind::kPartition || now < f.from || now >= f.until) continue;
        int gf = -1, gt = -1;
        for (std::size_t g = 0; g < f.groups.size(); ++g) {
            if (std::find(f.groups[g].begin(), f.groups[g].end(), from) != f.groups[g].end()) gf = static_cast<int>(g);
            if (std::find(f.groups[g].begin(), f.groups[g].end(), to) != f.groups[g].end()) gt = static_cast<int>(g);
        }
        if (gf != gt) return true;
    }
    return false;
}

double Network::drop_rate(ReplicaId from, ReplicaId to, SimTime now) const {
    double keep = 1.0;
    for (const auto& f : scenario_.faults) {
        if (f.kind != FaultKind::kDrop || now < f.from || now >= f.until) continue;
        const bool hit = std::find(f.replicas.begin(), f.replicas.end(), from) != f.replicas.end() ||
                         std::find(f.replicas.begin(), f.replicas.end(), to) != f.replicas.end();
        if (hit) keep *= 1.0 - f.rate;
    }
    if (now < scenario_.network.gst) keep *= 1.0 - scenario_.network.pre_gst_drop;
    return 1.0 - keep;
}

Route Network::route(ReplicaId from, ReplicaId to, Channel channel, std::size_t bytes, SimTime now) {
    auto& st = stats_[static_cast<std::size_t>(channel)];
    ++st.sent;
    st.bytes += bytes;
    Route r;
    if (from != to) {
        if (partitioned(from, to, now)) {
            ++st.dropped;
            r.dropped = true;
            return r;
        }
        const double p = drop_rate(from, to, now);
        if (p > 0 && rng_.bernoulli(p)) {
            ++st.dropped;
            r.dropped = true;
            return r;
        }
    }
    SimTime delay = sample_delay(from, to, channel);
    if (now < scenario_.network.gst && scenario_.network.pre_gst_max_extra > 0)
        delay += rng_.uniform(0, scenario_.network.pre_gst_max_extra);
    SimTime start = now;
    const double rate = scenario_.network.channels[static_cast<std::size_t>(channel)].bytes_per_us;
    if (rate > 0 && from != to) {
        auto& busy = link_busy_[{from, to, channel}];
        start = std::max(now, busy);
        const auto tx = static_cast<SimTime>(std::ceil(static_cast<double>(bytes) / rate));
        busy = start + tx;
        start = busy;
    }
    r.arrival = start + delay;
    return r;
}

}  // namespace raptr::sim
