// Copyright 2026 The raptr-sim Authors.
// Licensed under the Apache License, Version 2.0. See LICENSE at the
// repository root or http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "core/digest.hpp"

namespace raptr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class MalformedCertificate : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class DataUnavailable : public Error {
public:
    DataUnavailable(std::string what, std::vector<Digest> missing)
        : Error(std::move(what)), missing_(std::move(missing)) {}

    const std::vector<Digest>& missing() const noexcept { return missing_; }

private:
    std::vector<Digest> missing_;
};

}  // namespace raptr
