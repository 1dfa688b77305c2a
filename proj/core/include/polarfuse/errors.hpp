// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace polarfuse {

// Bad user input: malformed arguments, unknown config keys, out-of-range values.
// The CLI maps these to exit code 2.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Shape or size mismatch between images/tensors that must agree.
class DimensionError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

// File could not be read, written, or parsed. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Data violates a structural invariant (e.g. an encoding off its unit circle).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// NaN/Inf or other numerical failure mid-computation. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace polarfuse
