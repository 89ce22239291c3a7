#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgm {

enum class ErrorCode {
  NotEisenstein,
  NotIrreducibleResidue,
  PrecisionTooLow,
  PrecisionTooHigh,
  TowerMismatch,
  DivisionBelowPrecision,
  NotUnramifiedOverL,
  PrecisionTooLowToSeparate,
  FieldMismatch,
  NonUnitLinearTerm,
  InfiniteHeight,
  GuardExhausted,
  NonIntegralLaw,
  NonIntegralEndo,
  TruncationTooShort,
  Mismatch,
  NonConvergence,
  NormNotZero,
  HypothesisFailed,
  FormulaMismatch,
  PreconditionFailed,
  InvariantMismatch,
  ConfigParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fgm
