#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fevo {

// Coarse failure category, used by the CLI to pick an exit code.
enum class ErrorCategory { Validation, Domain, Integration, Analysis, Config, IO };

std::string_view to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define FEVO_DEFINE_ERROR(Name, Cat)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(ErrorCategory::Cat, what) {} \
  }

FEVO_DEFINE_ERROR(OrderingViolation, Validation);
FEVO_DEFINE_ERROR(ValidationError, Validation);
FEVO_DEFINE_ERROR(DomainError, Domain);
FEVO_DEFINE_ERROR(DimensionMismatch, Domain);
FEVO_DEFINE_ERROR(FormMismatch, Domain);
FEVO_DEFINE_ERROR(StepLimitExceeded, Integration);
FEVO_DEFINE_ERROR(NonFiniteState, Integration);
FEVO_DEFINE_ERROR(AnalyticUnavailable, Analysis);
FEVO_DEFINE_ERROR(InsufficientData, Analysis);
FEVO_DEFINE_ERROR(UnknownBuiltin, Config);
FEVO_DEFINE_ERROR(EmptyTrajectory, IO);
FEVO_DEFINE_ERROR(IoError, IO);

#undef FEVO_DEFINE_ERROR

// Config parse failure; carries the offending line (0 when not line-bound).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCategory::Config,
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace fevo
