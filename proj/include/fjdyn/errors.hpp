#pragma once

#include <stdexcept>
#include <string>

namespace fjdyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonStochasticRow : public Error {
 public:
  NonStochasticRow(int row, double sum)
      : Error("row " + std::to_string(row) + " of W sums to " + std::to_string(sum) +
              ", expected 1"),
        row_(row),
        sum_(sum) {}
  int row() const { return row_; }
  double sum() const { return sum_; }

 private:
  int row_;
  double sum_;
};

class OutOfRangeEntry : public Error {
 public:
  OutOfRangeEntry(std::string field, int row, int col, double value)
      : Error(field + "[" + std::to_string(row) + (col >= 0 ? "][" + std::to_string(col) : "") +
              "] = " + std::to_string(value) + " lies outside [0, 1]"),
        field_(std::move(field)),
        row_(row),
        col_(col) {}
  const std::string& field() const { return field_; }
  int row() const { return row_; }
  /// -1 for vector fields.
  int col() const { return col_; }

 private:
  std::string field_;
  int row_;
  int col_;
};

class NonConvergent : public Error {
 public:
  using Error::Error;
};

class EigensolverFailure : public Error {
 public:
  using Error::Error;
};

/// I - ΞW is singular: some independent component has no stubborn agent.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class GainOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario text; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& reason, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed scenario with an invalid field, e.g. field() == "W[3]".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fjdyn
