#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nosetip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `location()` is a 1-based line number for text
/// formats or a byte offset for binary formats, as named in the message.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t location)
        : Error(what), location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nosetip
