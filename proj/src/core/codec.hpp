// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/digest.hpp"

namespace raptr {

// Canonical byte encoding. Integers are fixed-width little-endian, variable
// length fields and nested records carry a u32 length prefix. Every encoder
// output is the unique encoding of its value.
class Encoder {
public:
    Encoder() { buf_.reserve(256); }

    Encoder& u8(std::uint8_t v);
    Encoder& u32(std::uint32_t v);
    Encoder& u64(std::uint64_t v);
    Encoder& i64(std::int64_t v);
    Encoder& boolean(bool v) { return u8(v ? 1 : 0); }
    Encoder& digest(const Digest& d);
    Encoder& bytes(std::span<const std::uint8_t> b);
    Encoder& str(std::string_view s);

    template <class F>
    Encoder& nested(F&& body) {
        const auto at = begin_nested();
        body(*this);
        end_nested(at);
        return *this;
    }

    const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() && { return std::move(buf_); }
    Digest hash() const { return sha256(buf_); }

private:
    std::size_t begin_nested();
    void end_nested(std::size_t at);

    std::vector<std::uint8_t> buf_;
};

class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    bool boolean();
    Digest digest();
    std::vector<std::uint8_t> bytes();
    std::string str();
    Decoder nested();

    bool done() const noexcept { return pos_ == data_.size(); }
    void expect_done() const;
    // Bounds a decoded element count by the bytes left so that hostile
    // lengths cannot trigger huge allocations.
    std::uint32_t count(std::size_t min_element_size = 1);

private:
    std::span<const std::uint8_t> take(std::size_t n);

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace raptr
