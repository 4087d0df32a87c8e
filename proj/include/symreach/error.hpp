// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace symreach {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not line up (matrix/vector sizes, set dimensions).
class DimensionError : public Error {
  public:
    using Error::Error;
};

// A precondition of an operation is violated (bad bounds, unknown symbol, ...).
class ContractError : public Error {
  public:
    using Error::Error;
};

// An inclusion-preserving abstraction cannot be built on the requested range.
class AbstractionError : public Error {
  public:
    using Error::Error;
};

// Malformed configuration, network or expression text.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace symreach
