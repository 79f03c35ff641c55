#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalefit {

enum class ErrorKind {
  Domain,             // argument outside its mathematical domain
  InvalidSpec,        // generator spec violates its invariants
  Synthesis,          // covariance embedding failed
  LengthMismatch,
  InsufficientData,   // series or pyramid too short for the request
  InsufficientPoints, // regression has fewer usable points than required
  Overflow,
  ZeroEnergy,
  Io,
  Parse,
  Version,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace scalefit
