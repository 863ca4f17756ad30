#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rhowalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position()` is the 0-based byte offset of the
/// offending character, or npos when the input ended early.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// An operation was called outside its precondition (e.g. rho(a, b) with a > b).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A C-sequence override ran out of elements before reaching the queried ordinal.
class OverrideExhausted : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed or inconsistent input file (space, labeling, override, result).
class InputError : public Error {
public:
    using Error::Error;
};

/// A labeling that is not strictly increasing on its window.
class InvalidLabeling : public InputError {
public:
    using InputError::InputError;
};

} // namespace rhowalk
