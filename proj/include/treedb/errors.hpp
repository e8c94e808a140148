#pragma once

#include <stdexcept>
#include <string>

namespace treedb {

/// Invalid parameters for a table, database, generator or run.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The fixed-size node table (or the plain vector table) ran out of slots.
/// Tables never resize, so this aborts whatever exploration is running.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A reference that was never handed out by the table it is used on.
class InvalidReference : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed model text; carries the 1-based position of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Raised while evaluating a model, e.g. an update leaving the declared domain.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace treedb
