#ifndef STREAMSAGE_ERROR_HPP
#define STREAMSAGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace streamsage {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched value kinds: numeric vs categorical, probability vs real,
// class target vs real target, and loss/prediction pairing violations.
class KindError : public Error {
public:
    using Error::Error;
};

// Schema violations: unknown feature, symbol outside the declared alphabet,
// wrong dimension, zero features.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Invalid configuration values: alpha outside (0,1), zero capacity,
// unknown estimator kind, d too large for exhaustive enumeration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Operations on objects in an unusable state: sampling an empty reservoir,
// predicting with an untrained tree, learning on a frozen model.
class StateError : public Error {
public:
    using Error::Error;
};

// Malformed external input (CSV rows, JSON documents), with location info.
class ParseError : public Error {
public:
    using Error::Error;
};

// Non-finite intermediate results: diverged gradients, invalid losses.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace streamsage

#endif
