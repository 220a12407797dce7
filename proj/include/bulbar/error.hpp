#pragma once

#include <stdexcept>
#include <string>

namespace bulbar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that is well-formed but violates a domain rule (score range,
/// overlapping spans, wrong point count, ...). CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed structured text (JSON, CSV). Carries line/field context in
/// the message.
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// File content outside the supported subset (e.g. stereo or non-PCM WAV).
class UnsupportedFormatError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Index or time outside the valid range of a signal.
class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Missing, unreadable, or truncated files. CLI exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

/// A feature that cannot be computed for an instance (no voiced frames,
/// too few cycles, zero variance...). The instance is dropped, never
/// imputed.
class MissingFeatureError : public Error {
public:
    using Error::Error;
};

/// Model training diverged or produced non-finite state.
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace bulbar
