#include "fpklab/error.hpp"

namespace fpk {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::NonNormalizableDrift: return "non-normalizable-drift";
    case ErrorKind::DiscretizationFailure: return "discretization-failure";
    case ErrorKind::NotInOrliczClass: return "not-in-orlicz-class";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Inapplicable: return "inapplicable";
    case ErrorKind::InstanceTooLarge: return "instance-too-large";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fpk
