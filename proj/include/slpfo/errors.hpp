#ifndef SLPFO_ERRORS_HPP
#define SLPFO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slpfo {

// Malformed text input (structure files, SLP files, queries).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A relation of arity greater than two reached an operation that needs arity <= 2.
class ArityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration-path operations require an apex SLP.
class ApexRequired : public std::runtime_error {
public:
    ApexRequired() : std::runtime_error("apex required: the SLP violates the apex condition") {}
};

// A configured resource cap was exceeded.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(const std::string& what, std::string size_lower_bound)
        : std::runtime_error(what), size_lower_bound_(std::move(size_lower_bound)) {}
    // Decimal lower bound on the size that triggered the cap.
    const std::string& size_lower_bound() const { return size_lower_bound_; }

private:
    std::string size_lower_bound_;
};

// Internal consistency failure (indicates a bug, never user error).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace slpfo

#endif
