#pragma once

#include <stdexcept>
#include <string>

namespace grouplim {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  validation,   // malformed input or violated precondition
  budget,       // a configured work limit would be exceeded
  unsupported,  // operation not defined for this input (e.g. infinite group)
  precision,    // request below the representable/truncation threshold
  internal,     // an internal consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};
struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};
struct PrecisionError : Error {
  explicit PrecisionError(const std::string& what) : Error(ErrorKind::precision, what) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace grouplim
