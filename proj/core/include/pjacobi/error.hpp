#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pjacobi {

enum class ErrorKind {
  kInvalidOperator,
  kNotNeighbors,
  kInvalidAxis,
  kTooLarge,
  kIncommensurateTorus,
  kGeometryMismatch,
  kNotHermitian,
  kTorusWithoutUnwrapConvention,
  kBoundaryContamination,
  kGridMismatch,
  kRadiusTooLarge,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for the resource guards (oversized dense problems, boundary leakage).
  bool is_resource_guard() const noexcept {
    return kind_ == ErrorKind::kTooLarge || kind_ == ErrorKind::kBoundaryContamination;
  }

 private:
  ErrorKind kind_;
};

}  // namespace pjacobi
