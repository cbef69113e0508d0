#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kato {

enum class ErrorKind {
  NotPrime,
  NotIrreducible,
  NotASubfield,
  FieldTooLarge,
  FieldMismatch,
  LengthMismatch,
  LengthTooLarge,
  TooLarge,
  ZeroInput,
  PoleAtPlace,
  ZeroEntry,
  SupportExceedsBound,
  BoundTooSmall,
  UnsupportedDegree,
  WildAtPlace,
  InsufficientPrecision,
  NotConstantExtension,
  NoPreimage,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kato
