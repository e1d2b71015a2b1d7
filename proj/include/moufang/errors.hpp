#pragma once

#include <stdexcept>
#include <string>

namespace moufang {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define MOUFANG_ERROR(Name)                                   \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

MOUFANG_ERROR(DivisionByZero)
MOUFANG_ERROR(DescriptorMismatch)
MOUFANG_ERROR(ParseError)
MOUFANG_ERROR(NotInValuationRing)
MOUFANG_ERROR(FieldMismatch)
MOUFANG_ERROR(RankTooLow)
MOUFANG_ERROR(RankNotOne)
MOUFANG_ERROR(GroupMismatch)
MOUFANG_ERROR(KindMismatch)
MOUFANG_ERROR(OppositeOrEqual)
MOUFANG_ERROR(BadParameterDomain)
MOUFANG_ERROR(DecompositionFailure)
MOUFANG_ERROR(IdentityInput)
MOUFANG_ERROR(BadClassification)
MOUFANG_ERROR(RankCollapse)
MOUFANG_ERROR(CollapsedHatRack)
MOUFANG_ERROR(LiftFailure)
MOUFANG_ERROR(CompatibilityFailure)
MOUFANG_ERROR(UnsupportedClass)
MOUFANG_ERROR(FactorMismatch)
MOUFANG_ERROR(SchemaError)

#undef MOUFANG_ERROR

}  // namespace moufang
