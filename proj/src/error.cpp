#include "zsiglab/error.hpp"

namespace zsig {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::OperandOverflow: return "OperandOverflow";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::ExpansionCap: return "ExpansionCap";
    case ErrorKind::ZeroIterate: return "ZeroIterate";
    case ErrorKind::DegenerateTriple: return "DegenerateTriple";
    case ErrorKind::DegenerateDiscriminant: return "DegenerateDiscriminant";
    case ErrorKind::PCFBase: return "PCFBase";
    case ErrorKind::ReducibleBase: return "ReducibleBase";
    case ErrorKind::Precondition: return "Precondition";
  }
  return "Unknown";
}

}  // namespace zsig
