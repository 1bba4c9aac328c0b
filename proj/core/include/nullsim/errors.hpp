#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nullsim {

enum class ErrorCode {
  OutOfDomain,
  DerivativeUnavailable,
  TooFewSamples,
  InvalidGrid,
  NotNull,
  GeodesicDegeneracy,
  BadInitialFrame,
  BadInput,
  IntegratorFailure,
  KappaVanishes,
  TauVanishes,
  SignChange,
  DomainOverflow,
  NonPositiveLambda,
  AnchorRequired,
  NotNullDirection,
  ParseError,
  UnknownBuiltin,
  ValidationError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `where` carries the offending
// parameter value when one exists.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& message,
                std::optional<double> where = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::optional<double> where_;
};

}  // namespace nullsim
