#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hopfkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: mismatched moduli, out-of-range indices, unknown ids.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Structure data that violates an axiom (non-associative table, bad unit, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A configured cap (dimension or enumeration bound) would be exceeded.
class ResourceError : public Error {
public:
    ResourceError(const std::string& bound, const std::string& what)
        : Error(what + " (bound: " + bound + ")"), bound_(bound) {}
    const std::string& bound() const noexcept { return bound_; }

private:
    std::string bound_;
};

// Malformed text input. `position` is a byte offset or a JSON field path.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    ParseError(const std::string& what, const std::string& field_path)
        : Error(what + " at " + field_path), position_(0), path_(field_path) {}
    std::size_t position() const noexcept { return position_; }
    const std::string& field_path() const noexcept { return path_; }

private:
    std::size_t position_;
    std::string path_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace hopfkit
