#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wbl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WBL_DECLARE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

WBL_DECLARE_ERROR(InvalidArgument);
WBL_DECLARE_ERROR(InvalidParameters);
WBL_DECLARE_ERROR(OutOfRange);
WBL_DECLARE_ERROR(TangencyNotFound);
WBL_DECLARE_ERROR(NoValidC);
WBL_DECLARE_ERROR(UnsupportedMeasure);
WBL_DECLARE_ERROR(NonIntegrableSingularity);
WBL_DECLARE_ERROR(UnsupportedGrowth);
WBL_DECLARE_ERROR(DegenerateWeight);
WBL_DECLARE_ERROR(CutIntersectsDomain);
WBL_DECLARE_ERROR(MassTooLarge);
WBL_DECLARE_ERROR(NoValidY);
WBL_DECLARE_ERROR(UnboundedWeight);
WBL_DECLARE_ERROR(BoundViolated);

#undef WBL_DECLARE_ERROR

/// Raised when an adaptive rule cannot reach its tolerance; carries the best
/// value and its error estimate.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, std::complex<double> value, double err)
      : Error(what), value_(value), err_(err) {}
  double value() const { return value_.real(); }
  std::complex<double> complex_value() const { return value_; }
  double err() const { return err_; }

 private:
  std::complex<double> value_;
  double err_;
};

}  // namespace wbl
