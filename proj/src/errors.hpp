#pragma once

#include <stdexcept>
#include <string>

namespace bnf {

enum class ErrorKind {
  InvalidArgument,
  Config,
  WeylViolation,
  EmptySpectrum,
  UncoveredEigenvalue,
  SlackExceeded,
  StabilityViolation,
  UnsupportedBasis,
  DegreeUnderflow,
  DegreeOverflow,
  SpectrumMismatch,
  ProductTooLarge,
  SingularDivisor,
  OutsideSafetyRadius,
  BlowUp,
  NumericalAbort,
  Io,
  Parse,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace bnf
