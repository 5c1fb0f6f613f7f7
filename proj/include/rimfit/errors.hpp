#pragma once

#include <stdexcept>
#include <string>

namespace rimfit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RIMFIT_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// geometry
RIMFIT_DEFINE_ERROR(TooFewPoints);
RIMFIT_DEFINE_ERROR(DegenerateConfiguration);
// images and edges
RIMFIT_DEFINE_ERROR(EmptyImage);
RIMFIT_DEFINE_ERROR(InvalidThresholds);
RIMFIT_DEFINE_ERROR(ImageIOError);
// contours
RIMFIT_DEFINE_ERROR(IndexOutOfRange);
RIMFIT_DEFINE_ERROR(NoGap);
// file formats
RIMFIT_DEFINE_ERROR(ParseError);
RIMFIT_DEFINE_ERROR(SchemaViolation);
RIMFIT_DEFINE_ERROR(BadConfig);
// evaluation and synthesis
RIMFIT_DEFINE_ERROR(EmptySet);
RIMFIT_DEFINE_ERROR(SpecInfeasible);

#undef RIMFIT_DEFINE_ERROR

}  // namespace rimfit
