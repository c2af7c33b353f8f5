// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qcaflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shapes that don't fit together.
struct DimensionError : Error {
  using Error::Error;
};

// Bad user input: flags, config files, labels.
struct ConfigError : Error {
  using Error::Error;
};

// A documented precondition of an operation was violated.
struct PreconditionError : Error {
  using Error::Error;
};

// Something that should converge or stay unitary did not.
struct NumericalInstability : Error {
  using Error::Error;
};

}  // namespace qcaflow
