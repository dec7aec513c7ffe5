#pragma once

#include <stdexcept>
#include <string>

namespace rws {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / stream failures.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed input files; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Invalid configuration; message aggregates all violations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Remote scoring service failures. `retriable` distinguishes transport
// faults (retried with backoff) from malformed responses (hard errors).
class ProtocolError : public Error {
public:
    ProtocolError(const std::string& msg, bool retriable)
        : Error(msg), retriable_(retriable) {}
    bool retriable() const { return retriable_; }

private:
    bool retriable_;
};

}  // namespace rws
