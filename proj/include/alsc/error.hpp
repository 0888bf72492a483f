#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alsc {

enum class ErrorKind {
  io,
  format,
  dimension_mismatch,
  invalid_argument,
  domain,
  generation,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is stable
/// and is what the CLI serializes into its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace alsc
