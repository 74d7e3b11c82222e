#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace layout {

enum class ErrorKind {
  MissingFile,
  SchemaViolation,
  InvariantViolation,
  HeightOutOfRange,
  UniverseNotCoverable,
  TooLarge,
  DegeneratePolygon,
  InvalidSpec,
  PoseOutsideFreeSpace,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

  /// True for failures caused by malformed or inconsistent inputs.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::MissingFile || kind_ == ErrorKind::SchemaViolation ||
           kind_ == ErrorKind::InvariantViolation || kind_ == ErrorKind::InvalidSpec ||
           kind_ == ErrorKind::HeightOutOfRange;
  }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace layout
