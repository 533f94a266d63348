// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "consensus/wire.hpp"
#include "json.hpp"

namespace raptr::sim {

using nlohmann::json;

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::kPass: return "pass";
        case Verdict::kSafetyViolation: return "safety-violation";
        case Verdict::kLivenessViolation: return "liveness-violation";
    }
    return "?";
}

struct Simulation::Node {
    ReplicaId id = 0;
    bool honest = true;
    std::unique_ptr<NodeEnv> env;
    std::unique_ptr<NodeHooks> hooks;
    std::unique_ptr<Replica> replica;
    std::unique_ptr<Adversary> adversary;
    SimTime adversary_at = kForever;
    SimTime crash_at = kForever;
    SimTime busy_until = 0;
    double skew = 1.0;
    std::map<TimerKey, std::uint64_t> timers;
    std::uint64_t timer_gen = 0;
    Round commit_marked = 0;
    Rng rng{0};
    bool submits = false;
};

class Simulation::NodeEnv final : public ReplicaEnv {
public:
    NodeEnv(Simulation& sim, Node& node) : sim_(sim), node_(node) {}

    SimTime now() const override { return sim_.now_; }
    void send(ReplicaId to, MessagePtr msg) override { sim_.outgoing(node_, {to}, msg); }
    void multicast(MessagePtr msg) override {
        std::vector<ReplicaId> all(sim_.nodes_.size());
        for (ReplicaId r = 0; r < all.size(); ++r) all[r] = r;
        sim_.outgoing(node_, std::move(all), msg);
    }
    void set_timer(const TimerKey& key, SimTime delay) override {
        const std::uint64_t gen = ++node_.timer_gen;
        node_.timers[key] = gen;
        const auto scaled = static_cast<SimTime>(std::llround(static_cast<double>(delay) * node_.skew));
        Event e;
        e.time = sim_.now_ + std::max<SimTime>(scaled, 0);
        e.kind = EventKind::kTimer;
        e.target = node_.id;
        e.timer = key;
        e.generation = gen;
        sim_.push(std::move(e));
    }
    void cancel_timer(const TimerKey& key) override { node_.timers.erase(key); }

private:
    Simulation& sim_;
    Node& node_;
};

class Simulation::NodeHooks final : public ReplicaObserver {
public:
    NodeHooks(Simulation& sim, Node& node) : sim_(sim), node_(node) {}

    void on_round_entered(ReplicaId id, Round r, const EntryReason&) override {
        if (!node_.honest) return;
        sim_.observer_->round_entered(id, r);
        sim_.metrics_->round_entered(r, sim_.now_);
        auto& t = sim_.timing_[r];
        if (t.first_entry < 0) {
            t.first_entry = sim_.now_;
            t.leader = sim_.scenario_.protocol.leader(r);
        }
    }
    void on_proposed(ReplicaId, const BlockPtr& b) override {
        sim_.observer_->register_block(b);
        if (!node_.honest) return;
        auto& t = sim_.timing_[b->round()];
        t.has_block = true;
        t.block = b->digest();
        const auto& p = b->payload();
        for (const auto& poa : p.poas) proposed(poa->batch().digest);
        for (const auto& sub : p.sub_blocks)
            for (const auto& info : sub) proposed(info.digest);
    }
    void on_qc_vote(ReplicaId id, Round r, Prefix p, const Digest& block) override {
        if (node_.honest) sim_.observer_->qc_vote(id, r, p, block);
    }
    void on_cc_vote(ReplicaId id, const QcPtr& qc) override {
        if (node_.honest) sim_.observer_->cc_vote(id, *qc);
    }
    void on_tc_vote(ReplicaId id, Round r) override {
        if (node_.honest) sim_.observer_->tc_vote(id, r);
    }
    void on_qc(ReplicaId id, const QcPtr& qc) override {
        if (node_.honest) sim_.observer_->qc_seen(id, qc);
    }
    void on_qc_high(ReplicaId id, const QcPtr& qc) override {
        if (node_.honest) sim_.observer_->qc_high(id, qc);
    }
    void on_tc_formed(ReplicaId, const TcPtr& tc) override {
        if (node_.honest) sim_.metrics_->tc_formed(tc->round() + 1);
    }
    void on_commit(ReplicaId id, const QcPtr& qc) override {
        if (!node_.honest) return;
        sim_.observer_->commit(id, qc);
        mark_committed(id, *qc);
    }
    void on_deliver(ReplicaId id, const MessageRef& m, const BatchPtr& batch, Round round) override {
        if (!node_.honest) return;
        sim_.observer_->deliver(id, m);
        if (!batch) return;
        for (TxId tx : batch->txs())
            if (sim_.metrics_->find(tx))
                sim_.metrics_->record_lifecycle_event(tx, metrics::TxEvent::kDelivered, sim_.now_, id, round);
    }
    void on_batch_created(ReplicaId id, const BatchPtr& b) override {
        sim_.batches_.emplace(b->digest(), b);
        sim_.observer_->batch_created(id, b);
        for (TxId tx : b->txs()) {
            sim_.metrics_->record_lifecycle_event(tx, metrics::TxEvent::kBatched, sim_.now_, id);
            sim_.metrics_->record_lifecycle_event(tx, metrics::TxEvent::kBatchBroadcast, sim_.now_, id);
        }
    }
    void on_batch_includable(ReplicaId id, const Digest& d, SimTime at) override {
        if (!node_.honest) return;
        auto it = sim_.batches_.find(d);
        if (it == sim_.batches_.end()) return;
        for (TxId tx : it->second->txs())
            sim_.metrics_->record_lifecycle_event(tx, metrics::TxEvent::kIncludable, at, id);
    }
    void on_fetch_request(ReplicaId, std::size_t) override {
        if (node_.honest) sim_.metrics_->fetch_request();
    }
    void on_rejected(ReplicaId, ReplicaId, std::string_view) override { ++sim_.rejected_; }

private:
    void proposed(const Digest& d) {
        if (!sim_.proposed_seen_.insert(d).second) return;
        auto it = sim_.batches_.find(d);
        if (it == sim_.batches_.end()) return;
        for (TxId tx : it->second->txs())
            sim_.metrics_->record_lifecycle_event(tx, metrics::TxEvent::kProposed, sim_.now_);
    }

    void mark_committed(ReplicaId id, const QuorumCertificate& qc) {
        const auto& registry = sim_.observer_->registry();
        const Block* b = registry.find(qc.block());
        const Round floor = node_.commit_marked;
        while (b && !b->is_genesis() && b->round() > floor) {
            auto it = sim_.timing_.find(b->round());
            if (it != sim_.timing_.end() && it->second.has_block && it->second.block == b->digest()) {
                auto& at = it->second.committed_at;
                if (at.empty()) at.assign(sim_.nodes_.size(), -1);
                if (at[id] < 0) at[id] = sim_.now_;
            }
            b = registry.find(b->qc_parent()->block());
        }
        node_.commit_marked = std::max(node_.commit_marked, qc.round());
    }

    Simulation& sim_;
    Node& node_;
};

class Simulation::NodeAdversaryContext final : public AdversaryContext {
public:
    NodeAdversaryContext(Simulation& sim, Node& node) : sim_(sim), node_(node) {}
    ReplicaId self() const override { return node_.id; }
    std::uint32_t n() const override { return static_cast<std::uint32_t>(sim_.nodes_.size()); }
    const Replica& core() const override { return *node_.replica; }
    Rng& rng() override { return node_.rng; }
    void emit(ReplicaId to, MessagePtr msg) override {
        if (to < sim_.nodes_.size()) sim_.transmit(node_.id, to, msg);
    }

private:
    Simulation& sim_;
    Node& node_;
};

Simulation::Simulation(const ScenarioConfig& scenario)
    : scenario_(scenario), honest_(scenario.honest_mask()), network_(scenario_, derive_seed(scenario.seed, 1)) {
    scenario_.validate();
    const auto& cfg = scenario_.protocol;
    auto keys = std::make_shared<const crypto::KeyShareSet>(crypto::make_scheme(scenario_.crypto), cfg.n,
                                                             cfg.sub_blocks, derive_seed(scenario_.seed, 2));
    auto genesis = Block::genesis(cfg.sub_blocks);
    observer_ = std::make_unique<Observer>(cfg, honest_, genesis);
    metrics_ = std::make_unique<metrics::MetricsCollector>(cfg.n, honest_);

    auto verified = std::make_shared<VerifiedSet>();
    std::vector<bool> submits(cfg.n, scenario_.load.submitters.empty());
    for (ReplicaId r : scenario_.load.submitters) submits[r] = true;

    for (ReplicaId id = 0; id < cfg.n; ++id) {
        auto node = std::make_unique<Node>();
        node->id = id;
        node->honest = honest_[id];
        node->rng = Rng(derive_seed(scenario_.seed, 100 + id));
        node->submits = submits[id] && scenario_.load.tx_per_second > 0;
        if (id < scenario_.network.clock_skew.size()) node->skew = scenario_.network.clock_skew[id];
        for (const auto& f : scenario_.faults) {
            if (f.replica != id) continue;
            if (f.kind == FaultKind::kCrash) node->crash_at = std::min(node->crash_at, f.at);
            if (f.kind == FaultKind::kByzantine) {
                node->adversary = make_adversary(f);
                node->adversary_at = f.at;
            }
        }
        node->env = std::make_unique<NodeEnv>(*this, *node);
        node->hooks = std::make_unique<NodeHooks>(*this, *node);
        node->replica = std::make_unique<Replica>(id, cfg, keys, *node->env, node->hooks.get());
        node->replica->share_verified_cache(verified);
        nodes_.push_back(std::move(node));
    }

    for (auto& node : nodes_) {
        Event start;
        start.kind = EventKind::kStart;
        start.target = node->id;
        push(start);
        Event tick;
        tick.kind = EventKind::kBatchTick;
        tick.target = node->id;
        tick.time = node->rng.uniform(0, cfg.batch_interval - 1);
        push(tick);
        if (node->submits) {
            Event tx;
            tx.kind = EventKind::kClientTx;
            tx.target = node->id;
            tx.time = static_cast<SimTime>(node->rng.exponential(1e6 / scenario_.load.tx_per_second));
            push(tx);
        }
    }
}

Simulation::~Simulation() = default;

Replica& Simulation::replica(ReplicaId id) { return *nodes_.at(id)->replica; }

void Simulation::enable_trace(std::size_t limit) {
    tracing_ = limit > 0;
    trace_limit_ = limit;
}

void Simulation::push(Event e) {
    e.seq = seq_++;
    queue_.push(std::move(e));
}

bool Simulation::crashed(const Node& node) const { return now_ >= node.crash_at; }

bool Simulation::adversarial(const Node& node) const { return node.adversary && now_ >= node.adversary_at; }

void Simulation::outgoing(Node& node, std::vector<ReplicaId> to, const MessagePtr& msg) {
    if (crashed(node)) return;
    MessagePtr m = msg;
    if (scenario_.network.serialize_wire)
        m = std::make_shared<const Message>(decode_message(encode_message(*msg), scenario_.protocol.availability));
    if (adversarial(node)) {
        NodeAdversaryContext ctx(*this, node);
        node.adversary->outgoing(ctx, to, m);
        return;
    }
    for (ReplicaId r : to) transmit(node.id, r, m);
}

void Simulation::transmit(ReplicaId from, ReplicaId to, const MessagePtr& msg) {
    if (const auto* p = std::get_if<ProposeMsg>(msg.get())) observer_->register_block(p->block);
    if (const auto* f = std::get_if<FetchResponseMsg>(msg.get()))
        for (const auto& b : f->blocks) observer_->register_block(b);
    const Channel channel = channel_of(*msg);
    const bool sized = scenario_.network.channels[static_cast<std::size_t>(channel)].bytes_per_us > 0;
    const Route route = network_.route(from, to, channel, sized ? wire_size(*msg) : 0, now_);
    if (route.dropped) return;
    if (now_ >= scenario_.network.gst && from != to && honest_[from] && honest_[to] &&
        route.arrival - now_ > scenario_.protocol.delta)
        network_.note_delta_violation();
    Event e;
    e.time = route.arrival;
    e.kind = EventKind::kDeliver;
    e.target = to;
    e.from = from;
    e.msg = msg;
    push(std::move(e));
}

void Simulation::note_trace(const Event& e) {
    std::string line = "t=" + std::to_string(e.time) + " ";
    switch (e.kind) {
        case EventKind::kStart: line += "start r" + std::to_string(e.target); break;
        case EventKind::kDeliver:
            line += "deliver " + std::to_string(e.from) + "->" + std::to_string(e.target) + " " + describe(*e.msg);
            break;
        case EventKind::kTimer:
            line += "timer r" + std::to_string(e.target) + " kind=" +
                    std::to_string(static_cast<int>(e.timer.kind)) + " id=" + std::to_string(e.timer.id);
            break;
        case EventKind::kBatchTick: line += "batch-tick r" + std::to_string(e.target); break;
        case EventKind::kClientTx: line += "client-tx r" + std::to_string(e.target); break;
    }
    trace_.push_back(std::move(line));
    while (trace_.size() > trace_limit_) trace_.pop_front();
}

void Simulation::process(const Event& e) {
    Node& node = *nodes_[e.target];
    const auto& cfg = scenario_.protocol;
    switch (e.kind) {
        case EventKind::kStart:
            if (!crashed(node)) node.replica->start();
            break;
        case EventKind::kDeliver: {
            if (crashed(node)) return;
            if (node.busy_until > now_) {
                Event later = e;
                later.time = node.busy_until;
                push(std::move(later));
                return;
            }
            if (tracing_) note_trace(e);
            if (adversarial(node)) {
                NodeAdversaryContext ctx(*this, node);
                node.adversary->incoming(ctx, e.from, e.msg);
            }
            node.replica->on_message(e.from, *e.msg);
            node.busy_until = now_ + scenario_.network.processing_cost;
            return;
        }
        case EventKind::kTimer: {
            auto it = node.timers.find(e.timer);
            if (it == node.timers.end() || it->second != e.generation) return;
            node.timers.erase(it);
            if (crashed(node)) return;
            if (tracing_) note_trace(e);
            node.replica->on_timer(e.timer);
            return;
        }
        case EventKind::kBatchTick: {
            if (crashed(node)) return;
            node.replica->make_batch(scenario_.load.tx_bytes);
            Event next = e;
            next.time = now_ + cfg.batch_interval +
                        (scenario_.load.batch_jitter > 0 ? node.rng.uniform(0, scenario_.load.batch_jitter) : 0);
            push(std::move(next));
            return;
        }
        case EventKind::kClientTx: {
            if (crashed(node) || now_ >= scenario_.load.stop) return;
            const TxId tx = next_tx_++;
            metrics_->register_tx(tx, node.id, now_);
            node.replica->submit(tx);
            Event next = e;
            next.time = now_ + std::max<SimTime>(
                                   1, static_cast<SimTime>(node.rng.exponential(1e6 / scenario_.load.tx_per_second)));
            push(std::move(next));
            return;
        }
    }
    if (tracing_) note_trace(e);
}

void Simulation::maybe_collect_garbage() {
    const Round floor = observer_->min_honest_committed_round();
    if (floor < gc_round_ + 20) return;
    gc_round_ = floor;
    for (auto& node : nodes_)
        if (!crashed(*node)) node->replica->collect_garbage(floor);
}

bool Simulation::horizon_reached() const {
    const auto& h = scenario_.horizon;
    if (h.time > 0 && now_ >= h.time) return true;
    if (h.rounds > 0) {
        Round lo = std::numeric_limits<Round>::max();
        for (const auto& node : nodes_)
            if (node->honest) lo = std::min(lo, node->replica->round());
        if (lo != std::numeric_limits<Round>::max() && lo >= h.rounds) return true;
    }
    return false;
}

bool Simulation::step() {
    if (queue_.empty()) return false;
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    observer_->set_now(now_);
    ++events_;
    process(e);
    return true;
}

RunReport Simulation::run(bool stop_on_violation) {
    std::uint64_t since_gc = 0;
    while (!horizon_reached()) {
        if (!step()) break;
        if (stop_on_violation && observer_->safety_violated()) break;
        if (++since_gc >= 4096) {
            since_gc = 0;
            maybe_collect_garbage();
        }
    }
    if (scenario_.checks.liveness && !observer_->safety_violated())
        observer_->finalize(now_ - scenario_.effective_liveness_slack());
    return make_report();
}

RunReport Simulation::make_report() {
    RunReport r;
    r.scenario = scenario_.name;
    r.seed = scenario_.seed;
    r.variant = scenario_.protocol.variant;
    r.violations = observer_->violations();
    r.verdict = observer_->safety_violated()     ? Verdict::kSafetyViolation
                : observer_->liveness_violated() ? Verdict::kLivenessViolation
                                                 : Verdict::kPass;
    r.events = events_;
    r.end_time = now_;
    r.min_round = std::numeric_limits<Round>::max();
    for (const auto& node : nodes_) {
        ReplicaSummary s;
        s.id = node->id;
        s.honest = node->honest;
        s.crashed = crashed(*node);
        s.round = node->replica->round();
        s.committed = node->replica->qc_committed()->rank();
        s.delivered = node->replica->delivered_count();
        s.delivered_digest = node->replica->delivered_digest().hex();
        if (node->honest) {
            r.min_round = std::min(r.min_round, s.round);
            r.max_round = std::max(r.max_round, s.round);
        }
        r.replicas.push_back(std::move(s));
    }
    if (r.min_round == std::numeric_limits<Round>::max()) r.min_round = 0;

    if (const auto& top = observer_->highest_commit()) {
        try {
            const auto& registry = observer_->registry();
            for (const auto& e : chain_of(*top, registry)) {
                const Block* b = registry.find(e.block);
                if (b->is_genesis()) continue;
                metrics_->block_committed(b->round(), e.prefix, scenario_.protocol.sub_blocks,
                                          observer_->first_seen(e.block));
            }
        } catch (const DataUnavailable&) {
        }
    }
    const auto trim = static_cast<SimTime>(std::llround(static_cast<double>(now_) * scenario_.checks.metrics_trim));
    const metrics::Window window{trim, now_ - trim};
    r.metrics = metrics_->aggregate(window);
    if (scenario_.hop_count_mode) r.hops = metrics_->hop_counts(scenario_.protocol.delta, window);
    r.channels = network_.stats();
    r.delta_violations = network_.delta_violations();
    r.rejected = rejected_;
    r.unchecked_containment = observer_->unchecked_containment();
    return r;
}

namespace {

json summary_json(const metrics::Summary& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"p25", s.p25}, {"p50", s.p50}, {"p75", s.p75}, {"max", s.max}};
}

}  // namespace

std::string RunReport::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["variant"] = to_string(variant);
    j["verdict"] = to_string(verdict);
    json vs = json::array();
    for (const auto& v : violations)
        vs.push_back({{"kind", to_string(v.kind)},
                      {"safety", is_safety(v.kind)},
                      {"time", v.time},
                      {"replica", v.replica},
                      {"detail", v.detail},
                      {"artifacts", v.artifacts}});
    j["violations"] = vs;
    j["events"] = events;
    j["end_time"] = end_time;
    j["rounds"] = {{"min", min_round}, {"max", max_round}};
    json reps = json::array();
    for (const auto& s : replicas)
        reps.push_back({{"id", s.id},
                        {"honest", s.honest},
                        {"crashed", s.crashed},
                        {"round", s.round},
                        {"committed", {s.committed.round, s.committed.prefix}},
                        {"delivered", s.delivered},
                        {"delivered_digest", s.delivered_digest}});
    j["replicas"] = reps;
    const auto& m = metrics;
    json hist = json::object();
    for (const auto& [p, c] : m.prefix_histogram) hist[std::to_string(p)] = c;
    j["metrics"] = {{"ordering", summary_json(m.ordering)},
                    {"dissemination", summary_json(m.dissemination)},
                    {"consensus", summary_json(m.consensus)},
                    {"block_inclusion", summary_json(m.block_inclusion)},
                    {"batch_inclusion", summary_json(m.batch_inclusion)},
                    {"end_to_end", summary_json(m.end_to_end)},
                    {"throughput_tps", m.throughput_tps},
                    {"complete", m.complete},
                    {"incomplete", m.incomplete},
                    {"rounds", m.rounds},
                    {"tc_rounds", m.tc_rounds},
                    {"tc_rate", m.tc_rate},
                    {"round_interval_mean", m.round_interval_mean},
                    {"blocks_per_second", m.blocks_per_second},
                    {"committed_blocks", m.committed_blocks},
                    {"full_prefix_blocks", m.full_prefix_blocks},
                    {"prefix_histogram", hist},
                    {"fetch_requests", m.fetch_requests}};
    if (hops) {
        json ch = json::object(), dh = json::object();
        for (const auto& [k, c] : hops->consensus_histogram) ch[std::to_string(k)] = c;
        for (const auto& [k, c] : hops->dissemination_histogram) dh[std::to_string(k)] = c;
        j["hop_counts"] = {{"samples", hops->samples},
                           {"dissemination", hops->dissemination},
                           {"inclusion", hops->inclusion},
                           {"consensus", hops->consensus},
                           {"ordering", hops->ordering},
                           {"consensus_histogram", ch},
                           {"dissemination_histogram", dh}};
    }
    json net = json::object();
    const char* names[] = {"consensus", "data", "qs-control"};
    for (std::size_t c = 0; c < kChannelCount; ++c)
        net[names[c]] = {{"sent", channels[c].sent}, {"dropped", channels[c].dropped}, {"bytes", channels[c].bytes}};
    j["network"] = net;
    j["delta_violations"] = delta_violations;
    j["rejected_messages"] = rejected;
    j["unchecked_containment"] = unchecked_containment;
    return j.dump(2);
}

RunReport run_scenario(const ScenarioConfig& scenario) {
    RunReport report = Simulation(scenario).run();
    if (report.verdict != Verdict::kSafetyViolation) return report;
    Simulation replay(scenario);
    replay.enable_trace(scenario.trace_limit > 0 ? scenario.trace_limit : 2000);
    RunReport again = replay.run();
    std::string text = "# scenario " + scenario.name + " seed " + std::to_string(scenario.seed) + "\n";
    for (const auto& line : replay.trace()) text += line + "\n";
    for (const auto& v : again.violations) {
        if (!is_safety(v.kind)) continue;
        text += "# violation " + std::string(to_string(v.kind)) + " at t=" + std::to_string(v.time) + " replica " +
                std::to_string(v.replica) + ": " + v.detail + "\n";
        for (const auto& a : v.artifacts) text += "#   artifact " + a + "\n";
        break;
    }
    report.counterexample = std::move(text);
    return report;
}

}  // namespace raptr::sim
