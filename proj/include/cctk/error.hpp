#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cctk {

enum class Errc {
  NotAPrime,
  NonUnitDenominator,
  PrimeMismatch,
  DivisionByZeroAtPrecision,
  NonUnitInput,
  PrecisionUnreachable,
  PrecisionExhausted,
  IndeterminatePolygon,
  InsufficientTruncation,
  HenselFails,
  SmallPrime,
  BadReduction,
  NonIntegralPoint,
  PointNotOnCurve,
  BaseDivisible,
  DimensionMismatch,
  PrimeTooSmall,
  EmptyRecords,
  NonSquarefree,
  ZeroVector,
  DomainError,
  NotSeparable,
  ZeroConstantTerm,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the toolkit carries one of the codes above so that
/// callers (the CLI in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace cctk
