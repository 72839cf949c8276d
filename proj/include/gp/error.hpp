#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gp {

enum class Errc {
  InvalidArgument,
  NotAUnit,
  NotInvertible,
  NotFound,
  ImpossibleOrder,
  BadExponent,
  NotMonic,
  NotADivisor,
  DimensionMismatch,
  NotPrime,
  BudgetExceeded,
  NotSquarefree,
  ClassNumberNotOne,
  ModulusMismatch,
  ToleranceOutOfRange,
  PoleAtLattice,
  IdentityTorsionPoint,
  EmptyPointSet,
  ZeroVector,
  Overflow,
  Unsupported,
  IoError,
};

const char* errc_name(Errc code) noexcept;

// Every failure in the library is reported as a gp::Error carrying one of
// the codes above. BudgetExceeded additionally records the required count.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::uint64_t required = 0)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        required_(required) {}

  Errc code() const noexcept { return code_; }
  std::uint64_t required() const noexcept { return required_; }

 private:
  Errc code_;
  std::uint64_t required_;
};

}  // namespace gp
