// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace raptr {

struct Digest {
    static constexpr std::size_t kSize = 32;
    std::array<std::uint8_t, kSize> bytes{};

    friend auto operator<=>(const Digest&, const Digest&) = default;

    std::string hex() const;
    std::string short_hex() const;
    bool is_zero() const noexcept;
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const noexcept;
};

Digest sha256(std::span<const std::uint8_t> data);

}  // namespace raptr
