#pragma once

#include <stdexcept>
#include <string>

namespace sc {

enum class Errc {
  ParseError,
  InvalidArgument,
  NotSimplicial,
  NotComplete,
  ZeroRay,
  DuplicateRay,
  BadWeights,
  Inconsistent,
  TorsionPicard,
  NonIntegralExponent,
  NoInteriorPoint,
  ZeroTuple,
  DegeneratePoint,
  ZeroK,
  NoFeasibleCone,
  NoMatchingSector,
  TooLarge,
  DegenerateReference,
  Budget,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace sc
