#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilcad {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A variable with no binding where the transform needs one.
class ScopeError : public Error {
public:
    using Error::Error;
};

// Domain violation inside a series or dual-number primitive (log at x <= 0,
// reciprocal at 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// An oracle or transform was asked about a shape it does not handle.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

}  // namespace ilcad
