// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "consensus/messages.hpp"

namespace raptr {

std::vector<std::uint8_t> encode_message(const Message& m);
// Throws DecodeError on malformed input. QCs are rebuilt with the receiver's
// availability threshold.
Message decode_message(std::span<const std::uint8_t> bytes, std::uint32_t availability);

}  // namespace raptr
