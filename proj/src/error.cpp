#include "gp/error.hpp"

namespace gp {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::NotFound: return "NotFound";
    case Errc::ImpossibleOrder: return "ImpossibleOrder";
    case Errc::BadExponent: return "BadExponent";
    case Errc::NotMonic: return "NotMonic";
    case Errc::NotADivisor: return "NotADivisor";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotPrime: return "NotPrime";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::ClassNumberNotOne: return "ClassNumberNotOne";
    case Errc::ModulusMismatch: return "ModulusMismatch";
    case Errc::ToleranceOutOfRange: return "ToleranceOutOfRange";
    case Errc::PoleAtLattice: return "PoleAtLattice";
    case Errc::IdentityTorsionPoint: return "IdentityTorsionPoint";
    case Errc::EmptyPointSet: return "EmptyPointSet";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::Overflow: return "Overflow";
    case Errc::Unsupported: return "Unsupported";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gp
