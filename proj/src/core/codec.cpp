// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#include "core/codec.hpp"

#include "core/errors.hpp"

namespace raptr {

Encoder& Encoder::u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
    std::uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    buf_.insert(buf_.end(), b, b + 4);
    return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    buf_.insert(buf_.end(), b, b + 8);
    return *this;
}

Encoder& Encoder::i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

Encoder& Encoder::digest(const Digest& d) {
    buf_.insert(buf_.end(), d.bytes.begin(), d.bytes.end());
    return *this;
}

Encoder& Encoder::bytes(std::span<const std::uint8_t> b) {
    u32(static_cast<std::uint32_t>(b.size()));
    buf_.insert(buf_.end(), b.begin(), b.end());
    return *this;
}

Encoder& Encoder::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
    return *this;
}

std::size_t Encoder::begin_nested() {
    const auto at = buf_.size();
    u32(0);
    return at;
}

void Encoder::end_nested(std::size_t at) {
    const auto len = static_cast<std::uint32_t>(buf_.size() - at - 4);
    for (int i = 0; i < 4; ++i) buf_[at + i] = static_cast<std::uint8_t>(len >> (8 * i));
}

std::span<const std::uint8_t> Decoder::take(std::size_t n) {
    if (data_.size() - pos_ < n) throw DecodeError("truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Decoder::u8() { return take(1)[0]; }

std::uint32_t Decoder::u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t Decoder::u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::int64_t Decoder::i64() { return static_cast<std::int64_t>(u64()); }

bool Decoder::boolean() {
    auto v = u8();
    if (v > 1) throw DecodeError("invalid boolean");
    return v == 1;
}

Digest Decoder::digest() {
    Digest d;
    auto b = take(Digest::kSize);
    std::copy(b.begin(), b.end(), d.bytes.begin());
    return d;
}

std::vector<std::uint8_t> Decoder::bytes() {
    auto n = u32();
    auto b = take(n);
    return {b.begin(), b.end()};
}

std::string Decoder::str() {
    auto n = u32();
    auto b = take(n);
    return {b.begin(), b.end()};
}

Decoder Decoder::nested() {
    auto n = u32();
    return Decoder(take(n));
}

void Decoder::expect_done() const {
    if (!done()) throw DecodeError("trailing bytes");
}

std::uint32_t Decoder::count(std::size_t min_element_size) {
    auto n = u32();
    if (min_element_size > 0 && n > (data_.size() - pos_) / min_element_size)
        throw DecodeError("element count exceeds input");
    return n;
}

}  // namespace raptr
