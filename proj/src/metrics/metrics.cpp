// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace raptr::metrics {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

const char* event_name(TxEvent e) {
    switch (e) {
        case TxEvent::kSubmitted: return "submitted";
        case TxEvent::kBatched: return "batched";
        case TxEvent::kBatchBroadcast: return "batch_broadcast";
        case TxEvent::kIncludable: return "includable";
        case TxEvent::kProposed: return "proposed";
        case TxEvent::kDelivered: return "delivered";
    }
    return "?";
}

void require(bool ok, TxId id, TxEvent e, const char* why) {
    if (!ok)
        throw MetricsError("tx " + std::to_string(id) + ": " + event_name(e) + " " + why);
}

}  // namespace

Summary summarize(std::vector<double> samples) {
    Summary s;
    if (samples.empty()) return s;
    std::sort(samples.begin(), samples.end());
    s.count = samples.size();
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    s.p25 = quantile(samples, 0.25);
    s.p50 = quantile(samples, 0.50);
    s.p75 = quantile(samples, 0.75);
    s.max = samples.back();
    return s;
}

MetricsCollector::MetricsCollector(std::uint32_t n, std::vector<bool> honest) : n_(n), honest_(std::move(honest)) {
    honest_.resize(n_, true);
    honest_count_ = static_cast<std::uint32_t>(std::count(honest_.begin(), honest_.end(), true));
}

void MetricsCollector::register_tx(TxId id, ReplicaId origin, SimTime at) {
    TxRecord r;
    r.id = id;
    r.origin = origin;
    r.honest_origin = origin < n_ && honest_[origin];
    r.submitted_at = at;
    r.delivered_at.assign(n_, -1);
    if (!records_.emplace(id, std::move(r)).second) throw MetricsError("tx " + std::to_string(id) + " registered twice");
}

TxRecord& MetricsCollector::record_lifecycle_event(TxId id, TxEvent event, SimTime at, ReplicaId replica,
                                                    Round round) {
    auto it = records_.find(id);
    if (it == records_.end()) throw MetricsError("unknown tx id " + std::to_string(id));
    auto& r = it->second;
    switch (event) {
        case TxEvent::kSubmitted:
            throw MetricsError("tx " + std::to_string(id) + " already submitted");
        case TxEvent::kBatched:
            require(r.batched_at < 0, id, event, "recorded twice");
            require(at >= r.submitted_at, id, event, "precedes submission");
            r.batched_at = at;
            break;
        case TxEvent::kBatchBroadcast:
            require(r.batched_at >= 0 && at >= r.batched_at, id, event, "precedes batching");
            if (r.batch_broadcast_at < 0) r.batch_broadcast_at = at;
            break;
        case TxEvent::kIncludable:
            require(r.batch_broadcast_at >= 0 && at >= r.batch_broadcast_at, id, event, "precedes broadcast");
            if (r.includable_at < 0 || at < r.includable_at) r.includable_at = at;
            break;
        case TxEvent::kProposed:
            require(r.batch_broadcast_at >= 0 && at >= r.batch_broadcast_at, id, event, "precedes broadcast");
            if (r.first_proposed_at < 0) r.first_proposed_at = at;
            break;
        case TxEvent::kDelivered:
            require(r.batch_broadcast_at >= 0 && at >= r.batch_broadcast_at, id, event, "precedes broadcast");
            require(replica < n_, id, event, "at unknown replica");
            if (r.delivered_at[replica] < 0) r.delivered_at[replica] = at;
            if (r.committing_round == 0) r.committing_round = round;
            break;
    }
    return r;
}

const TxRecord* MetricsCollector::find(TxId id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

bool MetricsCollector::complete(const TxRecord& r) const {
    for (std::uint32_t i = 0; i < n_; ++i)
        if (honest_[i] && r.delivered_at[i] < 0) return false;
    return honest_count_ > 0;
}

SimTime MetricsCollector::last_honest_delivery(const TxRecord& r) const {
    SimTime t = -1;
    for (std::uint32_t i = 0; i < n_; ++i)
        if (honest_[i]) t = std::max(t, r.delivered_at[i]);
    return t;
}

void MetricsCollector::round_entered(Round r, SimTime at) { round_first_entry_.try_emplace(r, at); }

void MetricsCollector::tc_formed(Round r) { tc_rounds_[r] = true; }

void MetricsCollector::block_committed(Round round, Prefix prefix, std::uint32_t sub_blocks, SimTime proposed_at) {
    blocks_.push_back({round, prefix, prefix == sub_blocks, proposed_at});
}

RunAggregates MetricsCollector::aggregate(const Window& w) const {
    RunAggregates a;
    std::vector<double> ordering, dissemination, consensus, inclusion, batching, e2e;
    std::uint64_t delivered_in_window = 0;
    std::vector<const TxRecord*> sorted;
    sorted.reserve(records_.size());
    for (const auto& [id, r] : records_) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->id < y->id; });
    for (const auto* rp : sorted) {
        const auto& r = *rp;
        if (!r.honest_origin || r.batch_broadcast_at < 0) continue;
        if (!w.contains(r.batch_broadcast_at)) continue;
        if (!complete(r)) {
            ++a.incomplete;
            continue;
        }
        ++a.complete;
        const SimTime done = last_honest_delivery(r);
        if (w.contains(done)) ++delivered_in_window;
        ordering.push_back(static_cast<double>(done - r.batch_broadcast_at));
        e2e.push_back(static_cast<double>(done - r.submitted_at));
        batching.push_back(static_cast<double>(r.batched_at - r.submitted_at));
        if (r.first_proposed_at >= 0) {
            dissemination.push_back(static_cast<double>(r.first_proposed_at - r.batch_broadcast_at));
            consensus.push_back(static_cast<double>(done - r.first_proposed_at));
            if (r.includable_at >= 0)
                inclusion.push_back(static_cast<double>(r.first_proposed_at - r.includable_at));
        }
    }
    a.ordering = summarize(std::move(ordering));
    a.dissemination = summarize(std::move(dissemination));
    a.consensus = summarize(std::move(consensus));
    a.block_inclusion = summarize(std::move(inclusion));
    a.batch_inclusion = summarize(std::move(batching));
    a.end_to_end = summarize(std::move(e2e));
    const double seconds = static_cast<double>(w.length()) / 1e6;
    if (seconds > 0) a.throughput_tps = static_cast<double>(delivered_in_window) / seconds;

    std::vector<SimTime> entries;
    for (const auto& [r, t] : round_first_entry_)
        if (w.contains(t)) {
            ++a.rounds;
            entries.push_back(t);
            if (tc_rounds_.count(r)) ++a.tc_rounds;
        }
    if (a.rounds > 0) a.tc_rate = static_cast<double>(a.tc_rounds) / static_cast<double>(a.rounds);
    if (entries.size() > 1)
        a.round_interval_mean =
            static_cast<double>(entries.back() - entries.front()) / static_cast<double>(entries.size() - 1);

    for (const auto& b : blocks_) {
        if (!w.contains(b.proposed_at)) continue;
        ++a.committed_blocks;
        if (b.full) ++a.full_prefix_blocks;
        ++a.prefix_histogram[b.prefix];
    }
    if (seconds > 0) a.blocks_per_second = static_cast<double>(a.committed_blocks) / seconds;
    a.fetch_requests = fetch_requests_;
    return a;
}

HopCounts MetricsCollector::hop_counts(SimTime delta, const Window& w) const {
    HopCounts h;
    if (delta <= 0) throw MetricsError("hop counts need a positive delta");
    double dis = 0, inc = 0, con = 0, ord = 0;
    const double d = static_cast<double>(delta);
    for (const auto& [id, r] : records_) {
        if (!r.honest_origin || r.batch_broadcast_at < 0 || !w.contains(r.batch_broadcast_at)) continue;
        if (!complete(r) || r.first_proposed_at < 0 || r.includable_at < 0) continue;
        const SimTime done = last_honest_delivery(r);
        ++h.samples;
        dis += static_cast<double>(r.includable_at - r.batch_broadcast_at) / d;
        inc += static_cast<double>(r.first_proposed_at - r.includable_at) / d;
        con += static_cast<double>(done - r.first_proposed_at) / d;
        ord += static_cast<double>(done - r.batch_broadcast_at) / d;
        ++h.consensus_histogram[static_cast<std::int64_t>(std::llround((done - r.first_proposed_at) / d))];
        ++h.dissemination_histogram[static_cast<std::int64_t>(
            std::llround((r.includable_at - r.batch_broadcast_at) / d))];
    }
    if (h.samples > 0) {
        const double k = static_cast<double>(h.samples);
        h.dissemination = dis / k;
        h.inclusion = inc / k;
        h.consensus = con / k;
        h.ordering = ord / k;
    }
    return h;
}

}  // namespace raptr::metrics
