#pragma once

#include <stdexcept>
#include <string>

namespace gv {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or malformed input data (CSV, image bytes, config files, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// File format / serialization problems (bad magic, truncated file, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Caller violated an interface contract (shape mismatch, bad argument).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Network / provider failures in the imagery client.
class FetchError : public Error {
public:
    using Error::Error;
};

}  // namespace gv
