#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of operands disagree (matrix vs vector, labels vs rows).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument violates an operation's precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A combinatorial quantity exceeds the configured work budget.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, std::string count)
        : Error(what + " (count " + count + ")"), count_(std::move(count)) {}

    const std::string& count() const noexcept { return count_; }

private:
    std::string count_;
};

/// Rows of a matrix are (numerically) collinear where the operation needs
/// them not to be.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Line and column are 1-based; 0 means "not
/// applicable".
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column,
               const std::string& message)
        : Error(format(source, line, column, message)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& source, std::size_t line,
                              std::size_t column, const std::string& message) {
        std::string out = source;
        if (line > 0) {
            out += ":" + std::to_string(line);
            if (column > 0) out += ":" + std::to_string(column);
        }
        return out + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace sigbound
