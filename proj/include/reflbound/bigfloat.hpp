#pragma once

// Thin value-semantic wrapper over an MPFR number with an explicit precision,
// plus the two arithmetic contexts (double / BigFloat) that every formula in
// the engine is templated on.

#include <mpfr.h>

static_assert(sizeof(long) == 8, "BigFloat assumes a 64-bit long");

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "reflbound/rational.hpp"

namespace reflbound {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(value_, bits); mpfr_set_zero(value_, 1); }
  BigFloat(double v, mpfr_prec_t bits) { mpfr_init2(value_, bits); mpfr_set_d(value_, v, MPFR_RNDN); }
  BigFloat(std::int64_t v, mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
    mpfr_set_si(value_, static_cast<long>(v), MPFR_RNDN);
  }
  BigFloat(const Rational& r, mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
    mpfr_set_si(value_, static_cast<long>(r.numerator()), MPFR_RNDN);
    mpfr_div_si(value_, value_, static_cast<long>(r.denominator()), MPFR_RNDN);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      }
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(value_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  /// Decimal rendering with `digits` significant digits.
  std::string str(int digits = 40) const;

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(std::int64_t v) { mpfr_mul_si(value_, value_, static_cast<long>(v), MPFR_RNDN); return *this; }
  BigFloat& operator/=(std::int64_t v) { mpfr_div_si(value_, value_, static_cast<long>(v), MPFR_RNDN); return *this; }
  BigFloat& operator+=(std::int64_t v) { mpfr_add_si(value_, value_, static_cast<long>(v), MPFR_RNDN); return *this; }
  BigFloat& operator-=(std::int64_t v) { mpfr_sub_si(value_, value_, static_cast<long>(v), MPFR_RNDN); return *this; }

  BigFloat operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.value_, value_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t value_;
};

namespace detail {
inline mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
  return a.precision() > b.precision() ? a.precision() : b.precision();
}
template <auto Op>
BigFloat unary(const BigFloat& x) {
  BigFloat r(x.precision());
  Op(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(detail::wider(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(detail::wider(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(detail::wider(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(detail::wider(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline BigFloat operator*(const BigFloat& a, std::int64_t v) { BigFloat r(a); r *= v; return r; }
inline BigFloat operator*(std::int64_t v, const BigFloat& a) { return a * v; }
inline BigFloat operator/(const BigFloat& a, std::int64_t v) { BigFloat r(a); r /= v; return r; }
inline BigFloat operator+(const BigFloat& a, std::int64_t v) { BigFloat r(a); r += v; return r; }
inline BigFloat operator-(const BigFloat& a, std::int64_t v) { BigFloat r(a); r -= v; return r; }

inline bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
inline bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

inline BigFloat log(const BigFloat& x) { return detail::unary<mpfr_log>(x); }
inline BigFloat exp(const BigFloat& x) { return detail::unary<mpfr_exp>(x); }
inline BigFloat sin(const BigFloat& x) { return detail::unary<mpfr_sin>(x); }
inline BigFloat cos(const BigFloat& x) { return detail::unary<mpfr_cos>(x); }
inline BigFloat sqrt(const BigFloat& x) { return detail::unary<mpfr_sqrt>(x); }
inline BigFloat abs(const BigFloat& x) { return detail::unary<mpfr_abs>(x); }

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }

/// floor(x) as an integer; x must be finite and in int64 range.
inline std::int64_t floor_to_int64(double x) { return static_cast<std::int64_t>(std::floor(x)); }
inline std::int64_t floor_to_int64(const BigFloat& x) {
  return static_cast<std::int64_t>(mpfr_get_si(x.get(), MPFR_RNDD));
}

// Arithmetic contexts.  A formula written as
//   template <class Arith> auto f(const Arith& ar, ...)
// builds its constants through `ar` and is evaluated either in hardware
// doubles or in MPFR at `ar.bits()`.

struct DoubleArith {
  using Real = double;
  int bits() const { return 53; }
  Real integer(std::int64_t v) const { return static_cast<double>(v); }
  Real ratio(const Rational& r) const { return to_double(r); }
  Real from_double(double v) const { return v; }
  Real pi() const { return 3.141592653589793238462643383279502884; }
  Real ln(std::int64_t v) const { return std::log(static_cast<double>(v)); }
  Real ln(const Rational& r) const {
    return std::log(static_cast<double>(r.numerator())) - std::log(static_cast<double>(r.denominator()));
  }
};

struct BigArith {
  using Real = BigFloat;
  explicit BigArith(int precision_bits) : bits_(precision_bits) {}
  int bits() const { return bits_; }
  Real integer(std::int64_t v) const { return BigFloat(v, bits_); }
  Real ratio(const Rational& r) const { return BigFloat(r, bits_); }
  Real from_double(double v) const { return BigFloat(v, bits_); }
  Real pi() const {
    BigFloat r(bits_);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
  }
  Real ln(std::int64_t v) const { return log(integer(v)); }
  Real ln(const Rational& r) const { return log(integer(r.numerator())) - log(integer(r.denominator())); }

 private:
  int bits_;
};

}  // namespace reflbound
