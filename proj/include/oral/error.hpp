// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oral {

/// Raised when a class model or object model violates its integrity rules
/// (unknown names, dangling references, multiplicity mismatches, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a path is not type-correct relative to its anchor class.
class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in an input file. Line and column are 1-based; 0 when the
/// position is unknown.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message)
        : std::runtime_error(message)
        , line_(0)
        , column_(0)
    { }
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
        , line_(line)
        , column_(column)
    { }

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace oral
