#ifndef MAHLER_ERRORS_HPP
#define MAHLER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mahler {

// Base of every error raised by the library. Each failure mode named in the
// public contracts has its own subclass so callers can dispatch with catch.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define MAHLER_DEFINE_ERROR(Name)                                        \
  class Name : public error {                                            \
   public:                                                               \
    using error::error;                                                  \
    const char* kind() const noexcept override { return #Name; }         \
  }

MAHLER_DEFINE_ERROR(InvalidArgument);
MAHLER_DEFINE_ERROR(DenominatorMayVanish);
MAHLER_DEFINE_ERROR(NotSolvable);
MAHLER_DEFINE_ERROR(DivergenceNotRuledOut);
MAHLER_DEFINE_ERROR(OrbitHitsZero);
MAHLER_DEFINE_ERROR(Inconclusive);
MAHLER_DEFINE_ERROR(PrecisionExhausted);
MAHLER_DEFINE_ERROR(HypothesisViolated);
MAHLER_DEFINE_ERROR(NotAdmissible);
MAHLER_DEFINE_ERROR(PrecisionTooLow);
MAHLER_DEFINE_ERROR(DependentRows);

#undef MAHLER_DEFINE_ERROR

}  // namespace mahler

#endif  // MAHLER_ERRORS_HPP
