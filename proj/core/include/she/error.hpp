#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace she {

/// Failure classes raised by the library. Each value names the condition,
/// not the module that raised it.
enum class ErrorKind {
  RejectNonGeneric,
  RejectDomain,
  InvalidArgument,
  DomainMargin,
  NoConvergence,
  ToleranceNotMet,
  ExceptionalCase,
  UnsupportedPairing,
  EmptyAfterMasking,
  NoPowerLaw,
  InsufficientSamples,
  IntegerBeta,
  CutViolation,
  OnCut,
  ExtrapolationUnstable,
  NotSerializable,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace she
