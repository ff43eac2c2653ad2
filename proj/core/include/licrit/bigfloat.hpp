#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "licrit/errors.hpp"

namespace licrit {

// Arbitrary-precision binary float, round-to-nearest everywhere. Each value
// carries its own precision in bits; binary operations allocate the result at
// the wider of the two operand precisions, so precision never silently decays.
// Relative error per operation is at most 2^(1-p) at width p (half-ulp
// rounding), and re-rounding to a strictly larger width is exact.
class BigReal {
public:
  static constexpr unsigned kMinBits = 24;

  BigReal() { mpfr_init2(v_, 128); mpfr_set_nan(v_); }
  explicit BigReal(unsigned bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_zero(v_, 1);
  }
  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, kMinBits);
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  // --- factories ---------------------------------------------------------
  static BigReal of(double x, unsigned bits) {
    BigReal r(bits);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  static BigReal of_long(long x, unsigned bits) {
    BigReal r(bits);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static BigReal of_ulong(unsigned long x, unsigned bits) {
    BigReal r(bits);
    mpfr_set_ui(r.v_, x, MPFR_RNDN);
    return r;
  }
  static BigReal of_mpz(const mpz_class& x, unsigned bits) {
    BigReal r(bits);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  // Exact rational p/q rounded once at the target width.
  static BigReal of_ratio(const mpz_class& p, const mpz_class& q, unsigned bits);
  // Parses a decimal string; throws parse_error on trailing garbage.
  static BigReal parse(const std::string& text, unsigned bits);

  static BigReal pi(unsigned bits) {
    BigReal r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static BigReal euler_gamma(unsigned bits) {
    BigReal r(bits);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }
  static BigReal log2_const(unsigned bits) {
    BigReal r(bits);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }
  static BigReal nan(unsigned bits) {
    BigReal r(bits);
    mpfr_set_nan(r.v_);
    return r;
  }

  // --- inspection ---------------------------------------------------------
  unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  BigReal to_bits(unsigned bits) const {
    BigReal r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Deterministic scientific-notation rendering with a fixed number of
  // significant digits (used for all serialized output).
  std::string str(int sig_digits = 20) const;

  // --- in-place arithmetic -------------------------------------------------
  BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigReal& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigReal& operator+=(long k) { mpfr_add_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigReal& operator-=(long k) { mpfr_sub_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigReal& negate() { mpfr_neg(v_, v_, MPFR_RNDN); return *this; }

  // --- binary arithmetic (result at the wider precision) -------------------
  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, long k) {
    BigReal r(a.bits());
    mpfr_mul_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(long k, const BigReal& a) { return a * k; }
  friend BigReal operator/(const BigReal& a, long k) {
    BigReal r(a.bits());
    mpfr_div_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(long k, const BigReal& a) {
    BigReal r(a.bits());
    mpfr_si_div(r.v_, k, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator+(const BigReal& a, long k) {
    BigReal r(a.bits());
    mpfr_add_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }
  friend BigReal operator+(long k, const BigReal& a) { return a + k; }
  friend BigReal operator-(const BigReal& a, long k) {
    BigReal r(a.bits());
    mpfr_sub_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(long k, const BigReal& a) {
    BigReal r(a.bits());
    mpfr_si_sub(r.v_, k, a.v_, MPFR_RNDN);
    return r;
  }

  // --- comparisons (IEEE semantics: anything with NaN is unordered) --------
  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }
  int cmp_d(double x) const { return mpfr_cmp_d(v_, x); }

  // --- elementary functions -------------------------------------------------
  friend BigReal abs(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal sqrt(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal exp(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal log(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal sin(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal cos(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend void sin_cos(BigReal& s, BigReal& c, const BigReal& a) {
    mpfr_set_prec(s.v_, a.bits());
    mpfr_set_prec(c.v_, a.bits());
    mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
  }
  friend BigReal atan(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_atan(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal atan2(const BigReal& y, const BigReal& x) {
    BigReal r(wider(y, x));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal acos(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_acos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal pow_si(const BigReal& a, long n) {
    BigReal r(a.bits());
    mpfr_pow_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend BigReal pow(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal floor(const BigReal& a) {
    BigReal r(a.bits());
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend BigReal hypot(const BigReal& a, const BigReal& b) {
    BigReal r(wider(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  // a*b + this, fused (one rounding).
  BigReal& fma_add(const BigReal& a, const BigReal& b) {
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
    return *this;
  }

  // Escape hatch for performance-critical kernels.
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

private:
  static unsigned clamp_bits(unsigned bits) { return bits < kMinBits ? kMinBits : bits; }
  static unsigned wider(const BigReal& a, const BigReal& b) {
    return a.bits() > b.bits() ? a.bits() : b.bits();
  }
  mpfr_t v_;
};

// Complex value as an explicit (re, im) pair of BigReal. Only the operations
// the library needs; all principal-branch conventions follow atan2.
class BigComplex {
public:
  BigComplex() = default;
  explicit BigComplex(unsigned bits) : re_(bits), im_(bits) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
  static BigComplex of(double re, double im, unsigned bits) {
    return BigComplex(BigReal::of(re, bits), BigReal::of(im, bits));
  }

  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  BigReal& re() { return re_; }
  BigReal& im() { return im_; }
  unsigned bits() const { return re_.bits() > im_.bits() ? re_.bits() : im_.bits(); }
  BigComplex to_bits(unsigned bits) const {
    return BigComplex(re_.to_bits(bits), im_.to_bits(bits));
  }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend BigComplex operator-(const BigComplex& a) {
    return BigComplex(-a.re_, -a.im_);
  }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ * b.re_ - a.im_ * b.im_,
                      a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) {
    return BigComplex(s * a.re_, s * a.im_);
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigReal d = b.re_ * b.re_ + b.im_ * b.im_;
    return BigComplex((a.re_ * b.re_ + a.im_ * b.im_) / d,
                      (a.im_ * b.re_ - a.re_ * b.im_) / d);
  }
  BigComplex& operator+=(const BigComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  BigComplex& operator-=(const BigComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  BigComplex& operator*=(const BigComplex& o) {
    *this = *this * o;
    return *this;
  }

  friend BigComplex conj(const BigComplex& a) { return BigComplex(a.re_, -a.im_); }
  friend BigReal abs(const BigComplex& a) { return hypot(a.re_, a.im_); }
  // |z|^2 without the square root.
  friend BigReal norm(const BigComplex& a) { return a.re_ * a.re_ + a.im_ * a.im_; }
  friend BigReal arg(const BigComplex& a) { return atan2(a.im_, a.re_); }
  friend BigComplex exp(const BigComplex& a) {
    BigReal m = exp(a.re_);
    BigReal s(a.im_.bits()), c(a.im_.bits());
    sin_cos(s, c, a.im_);
    return BigComplex(m * c, m * s);
  }
  // Principal branch: log|z| + i*atan2(im, re).
  friend BigComplex log(const BigComplex& a) {
    return BigComplex(log(abs(a)), arg(a));
  }
  // Integer power by binary exponentiation (n may be negative).
  friend BigComplex pow_si(const BigComplex& a, long n);
  friend BigComplex inverse(const BigComplex& a) {
    BigReal d = norm(a);
    return BigComplex(a.re_ / d, -(a.im_ / d));
  }

private:
  BigReal re_, im_;
};

} // namespace licrit
