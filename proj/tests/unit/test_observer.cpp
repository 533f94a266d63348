// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "doctest.h"
#include "helpers.hpp"
#include "sim/observer.hpp"
#include "sim/simulation.hpp"
#include "support/scenarios.hpp"

using namespace raptr;
using namespace raptr::sim;

namespace {

constexpr Prefix kM = 4;

struct Fork {
    Fork() : observer(make_config(), {true, true, true, false}, Block::genesis(kM)) {
        auto g = QuorumCertificate::genesis(observer.registry().genesis()->digest());
        a1 = test::child(g, 1, test::payload_of({{test::info(0, 1)}, {test::info(1, 1)}, {}, {}}), kM);
        b1 = test::child(g, 1, test::payload_of({{test::info(2, 1)}, {}, {}, {}}), kM);
        a2 = test::child(test::qc_for(a1, kM), 2, test::payload_of({{}, {}, {}, {}}), kM);
        for (const auto& b : {a1, b1, a2}) observer.register_block(b);
    }

    static ProtocolConfig make_config() {
        auto c = ProtocolConfig::with_faults(1);
        c.sub_blocks = kM;
        return c;
    }

    std::vector<ViolationKind> kinds() const {
        std::vector<ViolationKind> out;
        for (const auto& v : observer.violations()) out.push_back(v.kind);
        return out;
    }

    Observer observer;
    BlockPtr a1, b1, a2;
};

}  // namespace

TEST_CASE("consistent commits raise nothing") {
    Fork fx;
    fx.observer.commit(0, test::qc_for(fx.a1, 1));
    fx.observer.commit(1, test::qc_for(fx.a1, kM));
    fx.observer.commit(0, test::qc_for(fx.a2, 2));
    CHECK_FALSE(fx.observer.safety_violated());
    CHECK(fx.observer.highest_commit()->round() == 2);
    CHECK(fx.observer.committed_round(1) == 1);
}

TEST_CASE("conflicting commits are caught as a prefix-containment violation") {
    Fork fx;
    fx.observer.commit(0, test::qc_for(fx.a2, 2));
    fx.observer.commit(1, test::qc_for(fx.b1, 1));
    CHECK(fx.observer.safety_violated());
    REQUIRE(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kPrefixContainment});
    CHECK(fx.observer.violations()[0].replica == 1);
    CHECK(fx.observer.violations()[0].artifacts.size() == 2);
}

TEST_CASE("a smaller prefix of the same block is not a conflict") {
    Fork fx;
    fx.observer.commit(0, test::qc_for(fx.a1, kM));
    fx.observer.commit(1, test::qc_for(fx.a1, 0));
    CHECK_FALSE(fx.observer.safety_violated());
}

TEST_CASE("two certified blocks in a round break uniqueness") {
    Fork fx;
    fx.observer.qc_seen(0, test::qc_for(fx.a1, 2));
    fx.observer.qc_seen(1, test::qc_for(fx.a1, kM));
    CHECK_FALSE(fx.observer.safety_violated());
    CHECK(fx.observer.best_qc_prefix(1) == kM);
    CHECK(fx.observer.best_qc_prefix(2) == 0);
    fx.observer.qc_seen(2, test::qc_for(fx.b1, 1));
    CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kQcUniqueness});
}

TEST_CASE("vote discipline") {
    Fork fx;
    auto& o = fx.observer;
    o.qc_vote(0, 1, 0, fx.a1->digest());
    o.qc_vote(0, 1, kM, fx.a1->digest());
    CHECK_FALSE(o.safety_violated());

    SUBCASE("lower prefix in the same round") {
        o.qc_vote(0, 1, 2, fx.a1->digest());
        CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kVoteDiscipline});
    }
    SUBCASE("another block in the same round") {
        o.qc_vote(0, 1, kM, fx.b1->digest());
        CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kVoteDiscipline});
    }
    SUBCASE("vote after timing out") {
        o.tc_vote(1, 1);
        o.qc_vote(1, 1, 0, fx.a1->digest());
        CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kVoteDiscipline});
    }
    SUBCASE("second commit vote") {
        auto qc = test::qc_for(fx.a1, kM);
        o.cc_vote(2, *qc);
        o.cc_vote(2, *qc);
        CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kVoteDiscipline});
    }
}

TEST_CASE("monotonicity") {
    Fork fx;
    auto& o = fx.observer;
    o.round_entered(0, 2);
    o.round_entered(0, 2);
    o.qc_high(0, test::qc_for(fx.a1, 3));
    o.qc_high(0, test::qc_for(fx.a1, 1));
    CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kMonotonicity, ViolationKind::kMonotonicity});
}

TEST_CASE("delivery logs must agree and never repeat a slot") {
    Fork fx;
    auto& o = fx.observer;
    const MessageRef m1{test::digest_of(1), 1, 0}, m2{test::digest_of(2), 1, 1};
    o.deliver(0, m1);
    o.deliver(1, m1);
    o.deliver(0, m2);
    CHECK_FALSE(o.safety_violated());
    o.deliver(1, m1);
    o.deliver(2, m2);
    CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kDuplication, ViolationKind::kTotalOrder,
                                                    ViolationKind::kTotalOrder});
}

TEST_CASE("liveness checks at the end of the run") {
    Fork fx;
    auto& o = fx.observer;
    o.batch_created(0, Batch::make(0, 1, 100, {1}, 8));
    o.batch_created(3, Batch::make(3, 1, 100, {2}, 8));
    o.deliver(0, {test::digest_of(1), 1, 0});
    o.finalize(1000);
    CHECK(o.liveness_violated());
    CHECK_FALSE(o.safety_violated());
    CHECK(fx.kinds() == std::vector<ViolationKind>{ViolationKind::kValidity, ViolationKind::kTotality});
}

TEST_CASE("an injected fork inside a real run is flagged") {
    Simulation s(test::scenario({{"horizon", {{"rounds", 10}}}}));
    auto clean = s.run();
    REQUIRE(clean.verdict == Verdict::kPass);
    auto& o = s.observer();
    const auto top = o.highest_commit();
    REQUIRE(top);
    auto parent = o.registry().find(top->block());
    REQUIRE(parent);
    const auto& prev = parent->qc_parent();
    auto rival = test::child(
        prev, top->round(),
        test::payload_of({{test::info(9, 9)}, {test::info(9, 10)}, {test::info(9, 11)}, {test::info(9, 12)}}), kM);
    o.register_block(rival);
    o.commit(0, test::qc_for(rival, kM));
    CHECK(o.safety_violated());
    bool containment = false;
    for (const auto& v : o.violations()) containment |= v.kind == ViolationKind::kPrefixContainment;
    CHECK(containment);
}
