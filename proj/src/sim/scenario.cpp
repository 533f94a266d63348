// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "sim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace raptr::sim {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!j.is_object()) throw ScenarioError(std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ScenarioError("unknown key '" + it.key() + "' in " + std::string(where));
}

template <class T>
void read(const json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("bad value for '") + key + "': " + e.what());
    }
}

void read_time(const json& j, const char* key, SimTime& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (it->is_string() && it->get<std::string>() == "forever") {
        out = kForever;
        return;
    }
    read(j, key, out);
}

json time_json(SimTime t) { return t == kForever ? json("forever") : json(t); }

DelaySpec parse_delay(const json& j) {
    check_keys(j, {"kind", "value", "lo", "hi", "regions", "matrix", "jitter"}, "delay");
    DelaySpec d;
    std::string kind = "fixed";
    read(j, "kind", kind);
    if (kind == "fixed")
        d.kind = DelaySpec::Kind::kFixed;
    else if (kind == "uniform")
        d.kind = DelaySpec::Kind::kUniform;
    else if (kind == "regions")
        d.kind = DelaySpec::Kind::kRegions;
    else
        throw ScenarioError("unknown delay kind '" + kind + "'");
    read(j, "value", d.value);
    read(j, "lo", d.lo);
    read(j, "hi", d.hi);
    read(j, "regions", d.regions);
    read(j, "matrix", d.matrix);
    read(j, "jitter", d.jitter);
    return d;
}

json delay_json(const DelaySpec& d) {
    switch (d.kind) {
        case DelaySpec::Kind::kFixed: return {{"kind", "fixed"}, {"value", d.value}};
        case DelaySpec::Kind::kUniform: return {{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
        case DelaySpec::Kind::kRegions:
            return {{"kind", "regions"}, {"regions", d.regions}, {"matrix", d.matrix}, {"jitter", d.jitter}};
    }
    return {};
}

Behavior parse_behavior(const std::string& s) {
    if (s == "silent") return Behavior::kSilent;
    if (s == "equivocating-proposer") return Behavior::kEquivocatingProposer;
    if (s == "selective-batch-sender") return Behavior::kSelectiveBatchSender;
    if (s == "vote-withholder") return Behavior::kVoteWithholder;
    if (s == "stale-vote-replayer") return Behavior::kStaleVoteReplayer;
    throw ScenarioError("unknown byzantine behavior '" + s + "'");
}

FaultSpec parse_fault(const json& j) {
    check_keys(j, {"type", "replica", "behavior", "at", "replicas", "groups", "targets", "rate", "from", "until"},
               "fault");
    FaultSpec f;
    std::string type;
    read(j, "type", type);
    if (type == "crash")
        f.kind = FaultKind::kCrash;
    else if (type == "byzantine")
        f.kind = FaultKind::kByzantine;
    else if (type == "drop")
        f.kind = FaultKind::kDrop;
    else if (type == "partition")
        f.kind = FaultKind::kPartition;
    else
        throw ScenarioError("unknown fault type '" + type + "'");
    read(j, "replica", f.replica);
    if (j.contains("behavior")) f.behavior = parse_behavior(j.at("behavior").get<std::string>());
    read_time(j, "at", f.at);
    read(j, "replicas", f.replicas);
    read(j, "groups", f.groups);
    read(j, "targets", f.targets);
    read(j, "rate", f.rate);
    read_time(j, "from", f.from);
    read_time(j, "until", f.until);
    return f;
}

json fault_json(const FaultSpec& f) {
    switch (f.kind) {
        case FaultKind::kCrash: return {{"type", "crash"}, {"replica", f.replica}, {"at", f.at}};
        case FaultKind::kByzantine: {
            json j = {{"type", "byzantine"},
                      {"replica", f.replica},
                      {"behavior", to_string(f.behavior)},
                      {"at", f.at}};
            if (!f.targets.empty()) j["targets"] = f.targets;
            return j;
        }
        case FaultKind::kDrop:
            return {{"type", "drop"},
                    {"replicas", f.replicas},
                    {"rate", f.rate},
                    {"from", time_json(f.from)},
                    {"until", time_json(f.until)}};
        case FaultKind::kPartition:
            return {{"type", "partition"},
                    {"groups", f.groups},
                    {"from", time_json(f.from)},
                    {"until", time_json(f.until)}};
    }
    return {};
}

}  // namespace

SimTime DelaySpec::max_delay() const {
    switch (kind) {
        case Kind::kFixed: return value;
        case Kind::kUniform: return hi;
        case Kind::kRegions: {
            SimTime m = 0;
            for (const auto& row : matrix)
                for (auto v : row) m = std::max(m, v);
            return m + jitter;
        }
    }
    return 0;
}

const DelaySpec& NetworkSpec::delay_for(Channel c) const {
    const auto& ch = channels[static_cast<std::size_t>(c)];
    return ch.has_delay ? ch.delay : delay;
}

bool NetworkSpec::all_fixed() const {
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        const auto& d = delay_for(static_cast<Channel>(c));
        if (d.kind != DelaySpec::Kind::kFixed) return false;
        if (channels[c].bytes_per_us > 0) return false;
    }
    return processing_cost == 0 && pre_gst_max_extra == 0 && pre_gst_drop == 0 && clock_skew.empty();
}

std::string_view to_string(Behavior b) {
    switch (b) {
        case Behavior::kSilent: return "silent";
        case Behavior::kEquivocatingProposer: return "equivocating-proposer";
        case Behavior::kSelectiveBatchSender: return "selective-batch-sender";
        case Behavior::kVoteWithholder: return "vote-withholder";
        case Behavior::kStaleVoteReplayer: return "stale-vote-replayer";
    }
    return "unknown";
}

ScenarioConfig ScenarioConfig::parse(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("malformed scenario: ") + e.what());
    }
    check_keys(j, {"name", "protocol", "network", "faults", "load", "horizon", "seed", "checks", "crypto",
                   "hop_count_mode", "trace_limit"},
               "scenario");
    ScenarioConfig s;
    read(j, "name", s.name);
    read(j, "seed", s.seed);
    read(j, "hop_count_mode", s.hop_count_mode);
    read(j, "trace_limit", s.trace_limit);
    if (j.contains("crypto")) {
        auto k = crypto::parse_scheme(j.at("crypto").get<std::string>());
        if (!k) throw ScenarioError("unknown crypto scheme");
        s.crypto = *k;
    }

    if (j.contains("protocol")) {
        const auto& p = j.at("protocol");
        check_keys(p, {"variant", "n", "f", "quorum_size", "availability", "sub_blocks", "delta", "epsilon",
                       "min_batch_age", "batch_interval", "batch_capacity", "two_chain_commit"},
                   "protocol");
        auto& c = s.protocol;
        read(p, "f", c.f);
        c = ProtocolConfig::with_faults(c.f);
        read(p, "n", c.n);
        read(p, "quorum_size", c.quorum_size);
        read(p, "availability", c.availability);
        read(p, "sub_blocks", c.sub_blocks);
        read(p, "delta", c.delta);
        read(p, "epsilon", c.epsilon);
        read(p, "min_batch_age", c.min_batch_age);
        read(p, "batch_interval", c.batch_interval);
        read(p, "batch_capacity", c.batch_capacity);
        read(p, "two_chain_commit", c.two_chain_commit);
        if (p.contains("variant")) {
            auto v = parse_variant(p.at("variant").get<std::string>());
            if (!v) throw ScenarioError("unknown variant '" + p.at("variant").get<std::string>() + "'");
            c.variant = *v;
        }
    }

    if (j.contains("network")) {
        const auto& n = j.at("network");
        check_keys(n, {"delay", "channels", "gst", "pre_gst", "processing_cost", "clock_skew", "serialize_wire"},
                   "network");
        auto& net = s.network;
        if (n.contains("delay")) net.delay = parse_delay(n.at("delay"));
        if (n.contains("channels")) {
            const auto& chans = n.at("channels");
            check_keys(chans, {"consensus", "data", "qs-control"}, "channels");
            for (std::size_t c = 0; c < kChannelCount; ++c) {
                const std::string name(to_string(static_cast<Channel>(c)));
                if (!chans.contains(name)) continue;
                const auto& cj = chans.at(name);
                check_keys(cj, {"delay", "bytes_per_us"}, "channel");
                if (cj.contains("delay")) {
                    net.channels[c].has_delay = true;
                    net.channels[c].delay = parse_delay(cj.at("delay"));
                }
                read(cj, "bytes_per_us", net.channels[c].bytes_per_us);
            }
        }
        read(n, "gst", net.gst);
        if (n.contains("pre_gst")) {
            const auto& pg = n.at("pre_gst");
            check_keys(pg, {"max_extra_delay", "drop_rate"}, "pre_gst");
            read(pg, "max_extra_delay", net.pre_gst_max_extra);
            read(pg, "drop_rate", net.pre_gst_drop);
        }
        read(n, "processing_cost", net.processing_cost);
        read(n, "clock_skew", net.clock_skew);
        read(n, "serialize_wire", net.serialize_wire);
    }

    if (j.contains("faults")) {
        if (!j.at("faults").is_array()) throw ScenarioError("faults must be an array");
        for (const auto& f : j.at("faults")) s.faults.push_back(parse_fault(f));
    }

    if (j.contains("load")) {
        const auto& l = j.at("load");
        check_keys(l, {"tx_per_second", "tx_bytes", "batch_jitter", "submitters", "stop"}, "load");
        read(l, "tx_per_second", s.load.tx_per_second);
        read(l, "tx_bytes", s.load.tx_bytes);
        read(l, "batch_jitter", s.load.batch_jitter);
        read(l, "submitters", s.load.submitters);
        read_time(l, "stop", s.load.stop);
    }

    if (j.contains("horizon")) {
        const auto& h = j.at("horizon");
        check_keys(h, {"time", "rounds"}, "horizon");
        read(h, "time", s.horizon.time);
        read(h, "rounds", s.horizon.rounds);
    }

    if (j.contains("checks")) {
        const auto& c = j.at("checks");
        check_keys(c, {"liveness", "liveness_slack", "metrics_trim"}, "checks");
        read(c, "liveness", s.checks.liveness);
        read(c, "liveness_slack", s.checks.liveness_slack);
        read(c, "metrics_trim", s.checks.metrics_trim);
    }
    s.validate();
    return s;
}

ScenarioConfig ScenarioConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ScenarioConfig::serialize() const {
    json j;
    j["name"] = name;
    j["seed"] = seed;
    j["crypto"] = crypto::to_string(crypto);
    j["hop_count_mode"] = hop_count_mode;
    j["trace_limit"] = trace_limit;
    const auto& c = protocol;
    j["protocol"] = {{"variant", to_string(c.variant)},
                     {"n", c.n},
                     {"f", c.f},
                     {"quorum_size", c.quorum_size},
                     {"availability", c.availability},
                     {"sub_blocks", c.sub_blocks},
                     {"delta", c.delta},
                     {"epsilon", c.epsilon},
                     {"min_batch_age", c.min_batch_age},
                     {"batch_interval", c.batch_interval},
                     {"batch_capacity", c.batch_capacity},
                     {"two_chain_commit", c.two_chain_commit}};
    json net;
    net["delay"] = delay_json(network.delay);
    json chans = json::object();
    for (std::size_t i = 0; i < kChannelCount; ++i) {
        const auto& ch = network.channels[i];
        if (!ch.has_delay && ch.bytes_per_us == 0) continue;
        json cj = json::object();
        if (ch.has_delay) cj["delay"] = delay_json(ch.delay);
        if (ch.bytes_per_us != 0) cj["bytes_per_us"] = ch.bytes_per_us;
        chans[std::string(to_string(static_cast<Channel>(i)))] = cj;
    }
    net["channels"] = chans;
    net["gst"] = network.gst;
    net["pre_gst"] = {{"max_extra_delay", network.pre_gst_max_extra}, {"drop_rate", network.pre_gst_drop}};
    net["processing_cost"] = network.processing_cost;
    net["clock_skew"] = network.clock_skew;
    net["serialize_wire"] = network.serialize_wire;
    j["network"] = net;
    json faults_j = json::array();
    for (const auto& f : faults) faults_j.push_back(fault_json(f));
    j["faults"] = faults_j;
    j["load"] = {{"tx_per_second", load.tx_per_second},
                 {"tx_bytes", load.tx_bytes},
                 {"batch_jitter", load.batch_jitter},
                 {"submitters", load.submitters},
                 {"stop", time_json(load.stop)}};
    j["horizon"] = {{"time", horizon.time}, {"rounds", horizon.rounds}};
    j["checks"] = {{"liveness", checks.liveness},
                   {"liveness_slack", checks.liveness_slack},
                   {"metrics_trim", checks.metrics_trim}};
    return j.dump(2) + "\n";
}

void ScenarioConfig::validate() const {
    try {
        protocol.validate();
    } catch (const ScenarioError&) {
        throw;
    } catch (const ConfigError& e) {
        throw ScenarioError(e.what());
    }
    const auto n = protocol.n;
    auto check_id = [&](ReplicaId r, const char* what) {
        if (r >= n) throw ScenarioError(std::string(what) + " names replica " + std::to_string(r) + " >= n");
    };

    std::set<ReplicaId> faulty;
    for (const auto& f : faults) {
        switch (f.kind) {
            case FaultKind::kCrash:
            case FaultKind::kByzantine:
                check_id(f.replica, "fault");
                for (auto t : f.targets) check_id(t, "fault target");
                if (f.at < 0) throw ScenarioError("fault time must be non-negative");
                faulty.insert(f.replica);
                break;
            case FaultKind::kDrop:
                for (auto r : f.replicas) check_id(r, "drop window");
                if (f.rate < 0 || f.rate > 1) throw ScenarioError("drop rate must lie in [0, 1]");
                if (f.until < f.from) throw ScenarioError("drop window ends before it starts");
                break;
            case FaultKind::kPartition:
                for (const auto& g : f.groups)
                    for (auto r : g) check_id(r, "partition");
                if (f.until < f.from) throw ScenarioError("partition ends before it starts");
                break;
        }
    }
    if (faulty.size() > protocol.f)
        throw ScenarioError("fault budget exceeded: " + std::to_string(faulty.size()) + " faulty replicas but f=" +
                            std::to_string(protocol.f));

    auto check_delay = [&](const DelaySpec& d, const char* where) {
        switch (d.kind) {
            case DelaySpec::Kind::kFixed:
                if (d.value < 0) throw ScenarioError(std::string(where) + ": negative delay");
                break;
            case DelaySpec::Kind::kUniform:
                if (d.lo < 0 || d.hi < d.lo) throw ScenarioError(std::string(where) + ": need 0 <= lo <= hi");
                break;
            case DelaySpec::Kind::kRegions: {
                if (d.regions.size() != n) throw ScenarioError(std::string(where) + ": regions must list n entries");
                std::uint32_t k = 0;
                for (auto r : d.regions) k = std::max(k, r + 1);
                if (d.matrix.size() != k) throw ScenarioError(std::string(where) + ": matrix size mismatch");
                for (const auto& row : d.matrix) {
                    if (row.size() != k) throw ScenarioError(std::string(where) + ": matrix must be square");
                    for (auto v : row)
                        if (v < 0) throw ScenarioError(std::string(where) + ": negative delay");
                }
                if (d.jitter < 0) throw ScenarioError(std::string(where) + ": negative jitter");
                break;
            }
        }
        if (d.max_delay() > protocol.delta)
            throw ScenarioError(std::string(where) + ": post-GST delay bound " + std::to_string(d.max_delay()) +
                                " exceeds delta " + std::to_string(protocol.delta));
    };
    check_delay(network.delay, "network delay");
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        if (network.channels[c].has_delay) check_delay(network.channels[c].delay, "channel delay");
        if (network.channels[c].bytes_per_us < 0) throw ScenarioError("bytes_per_us must be non-negative");
    }
    if (network.gst < 0) throw ScenarioError("gst must be non-negative");
    if (network.pre_gst_max_extra < 0) throw ScenarioError("pre-GST extra delay must be non-negative");
    if (network.pre_gst_drop < 0 || network.pre_gst_drop >= 1) throw ScenarioError("pre-GST drop rate must lie in [0, 1)");
    if (network.processing_cost < 0) throw ScenarioError("processing cost must be non-negative");
    if (!network.clock_skew.empty()) {
        if (network.clock_skew.size() != n) throw ScenarioError("clock_skew must list n entries");
        for (auto s : network.clock_skew)
            if (!(s > 0)) throw ScenarioError("clock skew factors must be positive");
    }
    if (load.tx_per_second < 0) throw ScenarioError("load rate must be non-negative");
    for (auto r : load.submitters) check_id(r, "load submitter");
    if (load.batch_jitter < 0) throw ScenarioError("batch jitter must be non-negative");
    if (horizon.time <= 0 && horizon.rounds == 0) throw ScenarioError("horizon needs a time or a round count");
    if (horizon.time < 0) throw ScenarioError("horizon time must be non-negative");
    if (checks.metrics_trim < 0 || checks.metrics_trim >= 0.5) throw ScenarioError("metrics_trim must lie in [0, 0.5)");
    if (hop_count_mode && !network.all_fixed())
        throw ScenarioError("hop-count mode requires fixed delays, no bandwidth limits, no processing cost, "
                            "no clock skew and no pre-GST perturbation");
}

std::vector<bool> ScenarioConfig::honest_mask() const {
    std::vector<bool> honest(protocol.n, true);
    for (const auto& f : faults)
        if ((f.kind == FaultKind::kCrash || f.kind == FaultKind::kByzantine) && f.replica < protocol.n)
            honest[f.replica] = false;
    return honest;
}

SimTime ScenarioConfig::effective_liveness_slack() const {
    if (checks.liveness_slack > 0) return checks.liveness_slack;
    return 40 * protocol.delta + 8 * protocol.round_timeout();
}

}  // namespace raptr::sim
