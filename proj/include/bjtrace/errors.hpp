#pragma once

#include <stdexcept>
#include <string>

namespace bjtrace {

enum class ErrorKind {
  NotHermitian,
  EigenFailure,
  SingularInput,
  NotPsd,
  NotOrthogonal,
  DegenerateDirection,
  NotProjection,
  NotDensity,
  DomainError,
  BudgetExceeded,
  BadPermutation,
  BadInput,
};

const char* to_string(ErrorKind kind);

// All library failures surface as this exception; `kind()` names the violated
// precondition so callers (the CLI in particular) can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bjtrace
