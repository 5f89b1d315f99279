#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace remod {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input that failed to parse; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Subject or object entity could not be resolved to a graphlet node.
class TerminalNotFound : public Error {
public:
    using Error::Error;
};

// No route between the requested endpoints under the chosen graph variant.
class NoPathError : public Error {
public:
    using Error::Error;
};

} // namespace remod
