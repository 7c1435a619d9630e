#pragma once

#include <stdexcept>
#include <string>

namespace kgqa {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: empty fields, dimension mismatches, malformed config values.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Lookup of an id or name that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// An edge endpoint that does not resolve to a known node.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Malformed file content. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A model provider call failed after retries. Carries the pipeline step name
// ("embed", "extract", "ner", ...) so callers can report which stage broke.
class ProviderError : public Error {
public:
    ProviderError(std::string step, const std::string& msg)
        : Error("provider step '" + step + "': " + msg), step_(std::move(step)) {}

    const std::string& step() const { return step_; }

private:
    std::string step_;
};

// Filesystem-level failure (unreadable source, unwritable destination).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace kgqa
