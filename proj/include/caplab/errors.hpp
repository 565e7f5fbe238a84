#pragma once

#include <stdexcept>
#include <string>

namespace caplab {

enum class Errc {
  NotAMember,
  SizeMismatch,
  ArityTooLarge,
  TooSmall,
  PreconditionFailed,
  InsufficientWidth,
  NotStandardizable,
  BadScenario,
  DepthExhausted,
  WidthExhausted,
  FuelExhausted,
  ConstructionFailure,
  ParseError,
  Usage,
  Overflow,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

}  // namespace caplab
