#pragma once

#include <stdexcept>
#include <string>

namespace perimap {

enum class ErrorKind {
  NonPrime,
  Overflow,
  ZeroInverse,
  NotMonic,
  DegreeTooSmall,
  ContextMismatch,
  InvalidMap,
  EnumerationLimitExceeded,
  DegreeLimitExceeded,
  PrimeTooSmall,
  UnsupportedFamily,
  EmptySelection,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ZeroInverse: return "ZeroInverse";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::EnumerationLimitExceeded: return "EnumerationLimitExceeded";
    case ErrorKind::DegreeLimitExceeded: return "DegreeLimitExceeded";
    case ErrorKind::PrimeTooSmall: return "PrimeTooSmall";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Limit violations are resource errors; everything else is bad input.
  bool is_resource_limit() const noexcept {
    return kind_ == ErrorKind::EnumerationLimitExceeded ||
           kind_ == ErrorKind::DegreeLimitExceeded;
  }

 private:
  ErrorKind kind_;
};

}  // namespace perimap
