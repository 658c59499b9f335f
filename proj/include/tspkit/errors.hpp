// Error hierarchy shared by the whole toolkit.
//
// ConfigError: a spec/parameter is invalid or inputs are incompatible.
// DataError:   the data itself is unusable (too short, malformed, degenerate).
// The CLI maps ConfigError to exit 2 and DataError to exit 3.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tspkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

class DegenerateInputError : public DataError {
public:
    using DataError::DataError;
};

class AlignmentError : public DataError {
public:
    AlignmentError(const std::string& msg, double confidence)
        : DataError(msg), confidence(confidence) {}
    double confidence;
};

class DetectionError : public DataError {
public:
    using DataError::DataError;
};

// Malformed file; byte_offset points at the offending structure.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t byte_offset)
        : DataError(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset(byte_offset) {}
    std::size_t byte_offset;
};

class UnsupportedFormatError : public DataError {
public:
    using DataError::DataError;
};

// Decay curve does not span the dynamic range the estimator needs.
class InsufficientRangeError : public DataError {
public:
    InsufficientRangeError(const std::string& msg, double achieved_range_db)
        : DataError(msg), achieved_range_db(achieved_range_db) {}
    double achieved_range_db;
};

class IncompleteInputError : public DataError {
public:
    using DataError::DataError;
};

} // namespace tspkit
