#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omt {

/// A precondition of an API call was violated (pop on an empty frame stack,
/// stale backtrack mark, certifying a non-optimal result, ...).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input data violates a model invariant (encoder inputs, problem files).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(line == 0 ? message
                                       : std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace omt
