#pragma once

#include <stdexcept>
#include <string>

namespace fpk {

enum class ErrorKind {
  InvalidArgument,
  Unsupported,
  NonNormalizableDrift,
  DiscretizationFailure,
  NotInOrliczClass,
  Degenerate,
  Inapplicable,
  InstanceTooLarge,
  SearchFailure,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI
/// exit-code mapping, tests) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace fpk
