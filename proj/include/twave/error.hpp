#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twave {

enum class ErrorKind {
  Domain,
  NoWell,
  DegenerateRoot,
  NotInOmega,
  IntegrationFailure,
  PeriodMismatch,
  QuadratureNonconvergence,
  MethodDisagreement,
  StencilLeftOmega,
  NoiseFloor,
  WindingMismatch,
  VerdictConflict,
  ResidualTooLarge,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::NoWell: return "NoWell";
    case ErrorKind::DegenerateRoot: return "DegenerateRoot";
    case ErrorKind::NotInOmega: return "NotInOmega";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::PeriodMismatch: return "PeriodMismatch";
    case ErrorKind::QuadratureNonconvergence: return "QuadratureNonconvergence";
    case ErrorKind::MethodDisagreement: return "MethodDisagreement";
    case ErrorKind::StencilLeftOmega: return "StencilLeftOmega";
    case ErrorKind::NoiseFloor: return "NoiseFloor";
    case ErrorKind::WindingMismatch: return "WindingMismatch";
    case ErrorKind::VerdictConflict: return "VerdictConflict";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
  }
  return "Unknown";
}

/// Every failure raised by the toolkit carries a kind so callers (and the CLI
/// exit-code mapping) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors that mean "these parameters do not describe a periodic wave".
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::Domain || kind_ == ErrorKind::NoWell ||
           kind_ == ErrorKind::DegenerateRoot || kind_ == ErrorKind::NotInOmega;
  }

 private:
  ErrorKind kind_;
};

}  // namespace twave
