// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include "crypto/nias.hpp"
#include "doctest.h"
#include "oracles/crypto_fuzz.hpp"

using namespace raptr;
using namespace raptr::crypto;

namespace {

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("partial signatures round-trip for both schemes") {
    for (auto kind : {SchemeKind::kKeyedHash, SchemeKind::kEd25519}) {
        CAPTURE(to_string(kind));
        auto keys = std::make_shared<const KeyShareSet>(make_scheme(kind), 4, 3, 11);
        const auto& nias = keys->scheme();
        const auto msg = bytes("block 17");
        auto s = nias.psign(keys->secret(2, 1), msg);
        CHECK(s.signer == 2);
        CHECK(s.tag == 1);
        CHECK(nias.pver(keys->pub(2, 1), msg, s));
        CHECK_FALSE(nias.pver(keys->pub(2, 2), msg, s));
        CHECK_FALSE(nias.pver(keys->pub(1, 1), msg, s));
        CHECK_FALSE(nias.pver(keys->pub(2, 1), bytes("block 18"), s));

        Signer signer(keys, 3);
        auto t = signer.sign(0, msg);
        CHECK(signer.verify(3, 0, msg, t));
        CHECK_FALSE(signer.verify(2, 0, msg, t));

        KeyShareSet again(make_scheme(kind), 4, 3, 11);
        CHECK(again.pub(1, 2).key == keys->pub(1, 2).key);
        KeyShareSet other(make_scheme(kind), 4, 3, 12);
        CHECK(other.pub(1, 2).key != keys->pub(1, 2).key);
    }
}

TEST_CASE("aggregation rejects empty and repeated signer sets") {
    for (auto kind : {SchemeKind::kKeyedHash, SchemeKind::kEd25519}) {
        KeyShareSet keys(make_scheme(kind), 4, 2, 3);
        const auto& nias = keys.scheme();
        const auto msg = bytes("m");
        std::vector<PartialSignature> none;
        CHECK_FALSE(nias.combine(none).has_value());
        std::vector<PartialSignature> twice{nias.psign(keys.secret(1, 0), msg), nias.psign(keys.secret(1, 2), msg)};
        CHECK_FALSE(nias.combine(twice).has_value());

        std::vector<PartialSignature> ok{nias.psign(keys.secret(0, 2), msg), nias.psign(keys.secret(3, 1), msg)};
        auto agg = nias.combine(ok);
        REQUIRE(agg.has_value());
        std::vector<Claim> claims{{&keys.pub(0, 2), msg}, {&keys.pub(3, 1), msg}};
        CHECK(nias.verify_agg(claims, *agg));
        std::vector<Claim> reversed{claims[1], claims[0]};
        CHECK(nias.verify_agg(reversed, *agg));
        std::vector<Claim> fewer{claims[0]};
        CHECK_FALSE(nias.verify_agg(fewer, *agg));
        std::vector<Claim> empty;
        CHECK_FALSE(nias.verify_agg(empty, *agg));
    }
}

TEST_CASE("single-field mutations of the claimed set are rejected") {
    for (auto kind : {SchemeKind::kKeyedHash, SchemeKind::kEd25519}) {
        CAPTURE(to_string(kind));
        const auto r = fuzz::run_mutation_fuzz(kind, 1000, 21);
        CHECK(r.valid_accepted == r.cases);
        CHECK(r.mutants_rejected == r.cases);
        CHECK(r.by_field[0] > 0);
        CHECK(r.by_field[1] > 0);
        CHECK(r.by_field[2] > 0);
    }
}

TEST_CASE("scheme names") {
    CHECK(parse_scheme("ed25519") == SchemeKind::kEd25519);
    CHECK(parse_scheme("keyed-hash") == SchemeKind::kKeyedHash);
    CHECK_FALSE(parse_scheme("rsa").has_value());
}
