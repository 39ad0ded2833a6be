#pragma once

#include <stdexcept>
#include <string>

namespace zsig {

enum class ErrorKind {
  InvalidField,
  Parse,
  FieldMismatch,
  ZeroElement,
  AllZero,
  BudgetExceeded,
  OperandOverflow,
  DegreeMismatch,
  ExpansionCap,
  ZeroIterate,
  DegenerateTriple,
  DegenerateDiscriminant,
  PCFBase,
  ReducibleBase,
  Precondition,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace zsig
