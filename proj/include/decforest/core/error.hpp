#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decforest {

enum class ErrorKind {
  CycleDetected,
  IndexOutOfRange,
  NoParent,
  AuxiliaryVertex,
  IllegalOperation,
  NotBinary,
  NotATree,
  WordOverflow,
  NonBinaryWeight,
  CapExceeded,
  NegativeWeight,
  TooLarge,
  ParseError,
  IllegalSequence,
  NondeterministicStructure,
  ValueOutOfRange,
  InvariantBroken,
  DoubleFlip,
  OutOfOrderUpdate,
  UnknownStructure,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace decforest
