#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scimap {

// Bad input data, bad flags, violated preconditions. The CLI maps these to
// exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure in an input file, carrying the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& message)
        : Error(path + ":" + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Broken internal invariant. The CLI maps these to exit code 3.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace scimap
