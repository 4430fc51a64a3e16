#ifndef DATAFLOW_ERROR_HPP
#define DATAFLOW_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dataflow {

// Error categories map 1:1 onto CLI exit codes (see tools/dataflow.cpp):
// ParamError -> 2, ParseError -> 3, ValidationError -> 4, anything else -> 5.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller passed an out-of-range or inconsistent parameter (bad r, beta <= 0, ...).
struct ParamError : Error {
    using Error::Error;
};

// A file could not be decoded (ragged CSV, bad magic, dimension overflow, ...).
struct ParseError : Error {
    using Error::Error;
};

// Data violates a documented invariant (non-finite entry, label out of range,
// length mismatch, zero-variance column, ...).
struct ValidationError : Error {
    using Error::Error;
};

} // namespace dataflow

#endif
