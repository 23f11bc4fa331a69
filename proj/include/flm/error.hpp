#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flm {

enum class ErrorCode {
  ForeignTerm,
  UnknownTerm,
  NoJoin,
  UnsignedSpace,
  InvalidPartition,
  InvalidSpace,
  MissingPair,
  ShapeMismatch,
  SpaceMismatch,
  DuplicateEdge,
  InvalidGraph,
  EmptyCollection,
  IterationCapExceeded,
  UnknownLabel,
  DuplicateLink,
  InvalidModel,
  InvalidPolynomial,
  ForeignActivation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a stable code next to the
/// human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flm
