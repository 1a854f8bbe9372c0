#pragma once

#include <stdexcept>
#include <string>

namespace seqlab {

// Base for all library errors. Subtypes map to CLI exit codes:
// ConfigError -> 2, everything else -> 1.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/graph dimension mismatches. Message carries both shapes.
struct ShapeError : Error {
    using Error::Error;
};

// Violated API precondition (bad argument, wrong mode, ...).
struct ContractError : Error {
    using Error::Error;
};

// Malformed text input; message carries the line number where known.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates data invariants; message
// identifies the offending record.
struct IngestError : Error {
    using Error::Error;
};

// NaN/Inf where a finite value is required; message names the tensor.
struct NumericError : Error {
    using Error::Error;
};

// File/serialization problems (missing file, corrupt checkpoint, ...).
struct IoError : Error {
    using Error::Error;
};

// Bad run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace seqlab
