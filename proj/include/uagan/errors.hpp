#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uagan {

enum class ErrorKind : std::uint8_t {
    usage,
    configuration,
    numeric,
    state,
    format,
    invariant,
};

// Base of every failure raised by the library. The kind partitions failures
// into the classes the CLI maps onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::configuration, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class StateError : public Error {
public:
    explicit StateError(const std::string& what) : Error(ErrorKind::state, what) {}
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

enum class FormatErrorCode : std::uint8_t {
    bad_magic,
    version_mismatch,
    checksum_mismatch,
    truncated,
    malformed,
    io,
};

const char* to_string(FormatErrorCode code) noexcept;

class FormatError : public Error {
public:
    FormatError(FormatErrorCode code, const std::string& what)
        : Error(ErrorKind::format, std::string(to_string(code)) + ": " + what), code_(code) {}
    [[nodiscard]] FormatErrorCode code() const noexcept { return code_; }

private:
    FormatErrorCode code_;
};

}  // namespace uagan
