// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/types.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace raptr {

std::string to_string(const Rank& r) {
    return "(" + std::to_string(r.round) + "," + std::to_string(r.prefix) + ")";
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::kRaptr: return "RAPTR";
        case Variant::kBabyRaptr: return "BABY_RAPTR";
        case Variant::kBaselineQs: return "BASELINE_QS";
    }
    return "UNKNOWN";
}

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "RAPTR") return Variant::kRaptr;
    if (name == "BABY_RAPTR") return Variant::kBabyRaptr;
    if (name == "BASELINE_QS") return Variant::kBaselineQs;
    return std::nullopt;
}

ProtocolConfig ProtocolConfig::with_faults(std::uint32_t f) {
    ProtocolConfig c;
    c.f = f;
    c.n = 3 * f + 1;
    c.quorum_size = 2 * f + 1;
    c.availability = f + 1;
    return c;
}

void ProtocolConfig::validate() const {
    if (n != 3 * f + 1)
        throw ConfigError("n must equal 3f+1 (n=" + std::to_string(n) + ", f=" + std::to_string(f) + ")");
    if (quorum_size != 2 * f + 1) throw ConfigError("quorum_size must equal 2f+1");
    if (availability < f + 1 || availability > 2 * f + 1)
        throw ConfigError("availability S must lie in [f+1, 2f+1] (S=" + std::to_string(availability) + ")");
    if (sub_blocks == 0) throw ConfigError("sub_blocks must be positive");
    if (delta <= 0) throw ConfigError("delta must be positive");
    if (!(epsilon > 0.0) || epsilon >= 4.0) throw ConfigError("epsilon must lie in (0, 4)");
    if (min_batch_age < 0) throw ConfigError("min_batch_age must be non-negative");
    if (batch_interval <= 0) throw ConfigError("batch_interval must be positive");
    if (batch_capacity == 0) throw ConfigError("batch_capacity must be positive");
}

SimTime ProtocolConfig::qc_vote_delay() const {
    return std::max<SimTime>(1, std::llround(epsilon * static_cast<double>(delta)));
}

SimTime ProtocolConfig::round_timeout() const {
    return std::llround((4.0 + epsilon) * static_cast<double>(delta));
}

}  // namespace raptr
