#pragma once

#include <stdexcept>
#include <string>

namespace dv {

// Base for all runtime failures raised by the toolkit. Precondition
// violations (bad arguments, malformed configs) throw std::invalid_argument
// instead, so callers can tell "you called it wrong" from "the data is bad".
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Preamble search exhausted without a match, or the located preamble was
// unusable for calibration. CLI exit code 2.
class SyncError : public Error {
public:
    using Error::Error;
};

// Frame-level failures: truncated input, inconsistent length field. CLI
// exit code 3.
class FrameError : public Error {
public:
    using Error::Error;
};

// Checksum mismatch on an otherwise well-formed frame.
class CrcError : public FrameError {
public:
    using FrameError::FrameError;
};

// Symbol-stream decode failures (unclassifiable window, missing triad, ...).
// Messages carry the sample offset or period index where decoding stopped.
class DecodeError : public Error {
public:
    using Error::Error;
};

} // namespace dv
