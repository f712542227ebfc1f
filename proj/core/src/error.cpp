#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::Domain: return "domain";
    case ErrorCategory::Integration: return "integration";
    case ErrorCategory::Analysis: return "analysis";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::IO: return "io";
  }
  return "unknown";
}

}  // namespace fevo
