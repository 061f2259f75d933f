#pragma once

#include <stdexcept>
#include <string>

namespace sgnc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SGNC_DECLARE_ERROR(Name)   \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

// model
SGNC_DECLARE_ERROR(DimensionMismatch);
SGNC_DECLARE_ERROR(EmptyRowOrColumn);
SGNC_DECLARE_ERROR(DegenerateOutcome);
SGNC_DECLARE_ERROR(ParseError);

// idnc
SGNC_DECLARE_ERROR(SizeLimitExceeded);
SGNC_DECLARE_ERROR(EmptySetProduced);
SGNC_DECLARE_ERROR(UnknownPacket);

// galois
SGNC_DECLARE_ERROR(DivisionByZero);
SGNC_DECLARE_ERROR(LengthMismatch);
SGNC_DECLARE_ERROR(InconsistentSystem);

// partition / transmit
SGNC_DECLARE_ERROR(InvalidG);
SGNC_DECLARE_ERROR(NonReducedDiversity);
SGNC_DECLARE_ERROR(IncompleteLog);

// experiment harness
SGNC_DECLARE_ERROR(ConfigError);

#undef SGNC_DECLARE_ERROR

}  // namespace sgnc
