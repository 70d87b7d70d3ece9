#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed document: bad token, unknown keyword, wrong field count.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A "?" (or empty) cell in the data section.
class MissingValueError : public Error {
  public:
    MissingValueError(std::size_t row, std::string column)
        : Error("missing value at row " + std::to_string(row) + ", column '" + column + "'"),
          row_(row), column_(std::move(column)) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string &column() const noexcept { return column_; }

  private:
    std::size_t row_;
    std::string column_;
};

/// Incompatible columns, unknown labels, dimension mismatches.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// A label without a single positive instance (imbalance ratio undefined).
class DegenerateLabelError : public Error {
  public:
    explicit DegenerateLabelError(std::string label)
        : Error("label '" + label + "' has no positive instances"), label_(std::move(label)) {}
    [[nodiscard]] const std::string &label() const noexcept { return label_; }

  private:
    std::string label_;
};

class EmptyDataError : public Error {
  public:
    EmptyDataError() : Error("cannot train on an empty dataset") {}
};

/// Invalid experiment configuration (bad k, unknown method name, ...).
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace csd
