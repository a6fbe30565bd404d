#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shufflab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shuffle that cannot be applied to the current game state.
class IllegalOpError : public Error {
 public:
  using Error::Error;
};

/// A move needs a fresh bin while all t bins are occupied.
class CapacityError : public IllegalOpError {
 public:
  using IllegalOpError::IllegalOpError;
};

/// Replay stopped at the first illegal op; `op_index` is zero-based.
class ReplayError : public Error {
 public:
  ReplayError(std::size_t op_index, const std::string& what)
      : Error("op " + std::to_string(op_index) + ": " + what),
        op_index_(op_index) {}
  std::size_t op_index() const noexcept { return op_index_; }

 private:
  std::size_t op_index_;
};

/// Malformed op-sequence text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Exact search refused: the instance is outside the desk-scale guard or the
/// state table outgrew its budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A strategy was asked to run outside the regime it is defined for.
class ApplicabilityError : public Error {
 public:
  using Error::Error;
};

/// A snapshot trace does not match the workload it is analysed against.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Some group could not be covered the way the reduction requires.
class CoverError : public Error {
 public:
  using Error::Error;
};

/// Every group of the grouped workload touched memory.
class NoCleanGroupError : public Error {
 public:
  using Error::Error;
};

struct FieldError {
  std::string field;
  std::string message;
};

/// Parameter validation failure. Lists every offending field, not just the
/// first one found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldError> fields)
      : Error(summarize(fields)), fields_(std::move(fields)) {}
  ValidationError(std::string field, std::string message)
      : ValidationError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}
  const std::vector<FieldError>& fields() const noexcept { return fields_; }

 private:
  static std::string summarize(const std::vector<FieldError>& fields) {
    std::string out = "invalid parameters:";
    for (const auto& f : fields) out += " " + f.field + " (" + f.message + ")";
    return out;
  }
  std::vector<FieldError> fields_;
};

}  // namespace shufflab
