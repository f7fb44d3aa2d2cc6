#include "she/error.hpp"

namespace she {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RejectNonGeneric: return "RejectNonGeneric";
    case ErrorKind::RejectDomain: return "RejectDomain";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DomainMargin: return "DomainMargin";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::ExceptionalCase: return "ExceptionalCase";
    case ErrorKind::UnsupportedPairing: return "UnsupportedPairing";
    case ErrorKind::EmptyAfterMasking: return "EmptyAfterMasking";
    case ErrorKind::NoPowerLaw: return "NoPowerLaw";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::IntegerBeta: return "IntegerBeta";
    case ErrorKind::CutViolation: return "CutViolation";
    case ErrorKind::OnCut: return "OnCut";
    case ErrorKind::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case ErrorKind::NotSerializable: return "NotSerializable";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace she
