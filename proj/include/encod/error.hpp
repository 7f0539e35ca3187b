#pragma once

#include <stdexcept>
#include <string>

namespace encod {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Missing or inconsistent configuration (calibration, suite setup, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data is missing, insufficient or malformed.
class DataError : public Error {
public:
    using Error::Error;
};

/// A codec provider cannot run on this machine (e.g. no rar encoder installed).
class CodecUnavailable : public Error {
public:
    using Error::Error;
};

/// A serialized artifact failed structural validation.
class CorruptFile : public DataError {
public:
    using DataError::DataError;
};

/// A serialized artifact was written by an unsupported format version.
class VersionError : public DataError {
public:
    using DataError::DataError;
};

/// Non-finite values appeared during training or inference.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace encod
