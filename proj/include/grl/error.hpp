#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid domain, object, fact or action.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Text input that does not follow a grammar; carries a 1-based position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A network or checkpoint does not match the encoding layout it is used with.
class LayoutError : public Error {
public:
    using Error::Error;
};

class ChecksumError : public Error {
public:
    using Error::Error;
};

} // namespace grl
