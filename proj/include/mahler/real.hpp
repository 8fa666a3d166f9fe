#ifndef MAHLER_REAL_HPP
#define MAHLER_REAL_HPP

#include <cstdlib>
#include <string>
#include <utility>

#include <mpfr.h>

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"

namespace mahler {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

// Owning wrapper around an mpfr_t. Copies keep the source precision.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_rational(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }
  static Real from_si(long v, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
  }
  static Real infinity(mpfr_prec_t prec = kDefaultPrecision) {
    Real r(prec);
    mpfr_set_inf(r.v_, 1);
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Exact conversion; the value must be finite.
  Rational to_rational() const {
    if (!is_finite()) throw InvalidArgument("non-finite real has no rational value");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific notation with `digits` significant digits, e.g. "8.1642e-01".
  std::string to_decimal(int digits = 20) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits > 1 ? digits - 1 : 0, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

// Directed-rounding helpers used for radius bookkeeping.
namespace rnd {

inline Real add(const Real& a, const Real& b, mpfr_prec_t prec, mpfr_rnd_t r) {
  Real out(prec);
  mpfr_add(out.get(), a.get(), b.get(), r);
  return out;
}
inline Real sub(const Real& a, const Real& b, mpfr_prec_t prec, mpfr_rnd_t r) {
  Real out(prec);
  mpfr_sub(out.get(), a.get(), b.get(), r);
  return out;
}
inline Real mul(const Real& a, const Real& b, mpfr_prec_t prec, mpfr_rnd_t r) {
  Real out(prec);
  mpfr_mul(out.get(), a.get(), b.get(), r);
  return out;
}
inline Real div(const Real& a, const Real& b, mpfr_prec_t prec, mpfr_rnd_t r) {
  Real out(prec);
  mpfr_div(out.get(), a.get(), b.get(), r);
  return out;
}
inline Real abs(const Real& a, mpfr_prec_t prec, mpfr_rnd_t r) {
  Real out(prec);
  mpfr_abs(out.get(), a.get(), r);
  return out;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace rnd

}  // namespace mahler

#endif  // MAHLER_REAL_HPP
