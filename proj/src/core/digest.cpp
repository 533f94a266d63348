// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/digest.hpp"

#include <sodium.h>

#include <cstring>

namespace raptr {

namespace {

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

std::string Digest::hex() const {
    std::string out;
    out.reserve(kSize * 2);
    for (auto b : bytes) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xf]);
    }
    return out;
}

std::string Digest::short_hex() const { return hex().substr(0, 8); }

bool Digest::is_zero() const noexcept {
    for (auto b : bytes)
        if (b != 0) return false;
    return true;
}

std::size_t DigestHash::operator()(const Digest& d) const noexcept {
    std::size_t h;
    std::memcpy(&h, d.bytes.data(), sizeof h);
    return h;
}

Digest sha256(std::span<const std::uint8_t> data) {
    Digest d;
    crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
    return d;
}

}  // namespace raptr
