#include "errors.hpp"

namespace bnf {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::WeylViolation: return "WeylViolation";
    case ErrorKind::EmptySpectrum: return "EmptySpectrum";
    case ErrorKind::UncoveredEigenvalue: return "UncoveredEigenvalue";
    case ErrorKind::SlackExceeded: return "SlackExceeded";
    case ErrorKind::StabilityViolation: return "StabilityViolation";
    case ErrorKind::UnsupportedBasis: return "UnsupportedBasis";
    case ErrorKind::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::ProductTooLarge: return "ProductTooLarge";
    case ErrorKind::SingularDivisor: return "SingularDivisor";
    case ErrorKind::OutsideSafetyRadius: return "OutsideSafetyRadius";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::NumericalAbort: return "NumericalAbort";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

}  // namespace bnf
