#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foldlab {

enum class ErrorKind {
  InvalidInput,
  Precondition,
  DegenerateBoundary,
  SingularPoint,
  DegeneratePlane,
  OutsideTable,
  Accumulation,
  Config,
  Numeric,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegenerateBoundary: return "degenerate-boundary";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::DegeneratePlane: return "degenerate-plane";
    case ErrorKind::OutsideTable: return "outside-table";
    case ErrorKind::Accumulation: return "accumulation";
    case ErrorKind::Config: return "config";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace foldlab
