#pragma once

#include <stdexcept>
#include <string>

namespace fractrans {

// Base of everything the library throws. `numeric()` separates failures of the
// maps/masks themselves (CLI exit status 2) from bad input (exit status 1).
class Error : public std::runtime_error {
 public:
  Error(const std::string& kind, const std::string& what, bool numeric)
      : std::runtime_error(kind + ": " + what), kind_(kind), numeric_(numeric) {}

  const std::string& kind() const noexcept { return kind_; }
  bool numeric() const noexcept { return numeric_; }

 private:
  std::string kind_;
  bool numeric_;
};

#define FRACTRANS_DEFINE_ERROR(Name, IsNumeric)                            \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(#Name, what, IsNumeric) {} \
  };

FRACTRANS_DEFINE_ERROR(DegenerateDenominator, true)
FRACTRANS_DEFINE_ERROR(NotInvertibleHere, true)
FRACTRANS_DEFINE_ERROR(MaskGap, true)
FRACTRANS_DEFINE_ERROR(OrbitEscape, true)
FRACTRANS_DEFINE_ERROR(EmptyAddress, false)
FRACTRANS_DEFINE_ERROR(BadProbabilities, false)
FRACTRANS_DEFINE_ERROR(NoIntersection, false)
FRACTRANS_DEFINE_ERROR(InvalidArgument, false)
FRACTRANS_DEFINE_ERROR(ConfigError, false)
FRACTRANS_DEFINE_ERROR(IoError, false)

#undef FRACTRANS_DEFINE_ERROR

}  // namespace fractrans
