#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

#include "gkp/errors.hpp"

namespace gkp {

/// Arbitrary-precision real backed by MPFR. Every value carries its own
/// mantissa precision: binary operations produce results at the larger of the
/// two operand precisions, so precision decisions are made once, where values
/// enter a computation (usually through a PrecisionContext). NaN or infinity
/// in a result raises CancellationError instead of propagating silently.
class HPReal {
 public:
  HPReal() { mpfr_init2(v_, 64); }
  explicit HPReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  HPReal(const HPReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  HPReal(HPReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  HPReal& operator=(const HPReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  HPReal& operator=(HPReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~HPReal() { mpfr_clear(v_); }

  static HPReal of(double x, mpfr_prec_t prec);
  static HPReal of(long x, mpfr_prec_t prec);
  static HPReal parse(std::string_view s, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  /// Same value rounded into a copy at precision `prec`.
  HPReal at_precision(mpfr_prec_t prec) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Decimal form with `sig` significant digits (round-trips at that length).
  std::string str(int sig = 25) const;

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);
  HPReal operator-() const;
  HPReal& operator+=(const HPReal& o) { return *this = *this + o; }
  HPReal& operator-=(const HPReal& o) { return *this = *this - o; }
  HPReal& operator*=(const HPReal& o) { return *this = *this * o; }
  HPReal& operator/=(const HPReal& o) { return *this = *this / o; }

  friend bool operator<(const HPReal& a, const HPReal& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator>(const HPReal& a, const HPReal& b) { return b < a; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return !(b < a); }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return !(a < b); }
  friend bool operator==(const HPReal& a, const HPReal& b) {
    return mpfr_cmp(a.v_, b.v_) == 0;
  }
  friend bool operator!=(const HPReal& a, const HPReal& b) { return !(a == b); }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
};

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal log(const HPReal& x);
HPReal pow(const HPReal& x, long e);
HPReal pow(const HPReal& x, const HPReal& e);
HPReal sin(const HPReal& x);
HPReal cos(const HPReal& x);
HPReal atan2(const HPReal& y, const HPReal& x);
HPReal sinh(const HPReal& x);
HPReal cosh(const HPReal& x);
HPReal tanh(const HPReal& x);
HPReal sech(const HPReal& x);
HPReal acosh(const HPReal& x);
/// asech(x) = acosh(1/x); domain 0 < x <= 1.
HPReal asech(const HPReal& x);
HPReal min(const HPReal& a, const HPReal& b);
HPReal max(const HPReal& a, const HPReal& b);

/// |a - b| <= tol * max(|a|, |b|). With tol scaled to the context this is the
/// standard relative-agreement predicate used by invariants and tests.
bool rel_close(const HPReal& a, const HPReal& b, const HPReal& tol);
bool rel_close(const HPReal& a, const HPReal& b, double tol);

/// Complex value over HPReal. Only the operations the closed Gaussian-moment
/// algebra needs; no transcendental complex functions.
struct HPComplex {
  HPReal re, im;

  HPComplex() = default;
  HPComplex(HPReal r, HPReal i) : re(std::move(r)), im(std::move(i)) {}
  explicit HPComplex(const HPReal& r) : re(r), im(HPReal::of(0L, r.precision())) {}

  static HPComplex zero(mpfr_prec_t prec) {
    return {HPReal::of(0L, prec), HPReal::of(0L, prec)};
  }
  /// e^{i phi}.
  static HPComplex unit_phase(const HPReal& phi) { return {cos(phi), sin(phi)}; }

  HPComplex conj() const { return {re, -im}; }
  HPReal norm2() const { return re * re + im * im; }
  HPReal abs() const { return gkp::sqrt(norm2()); }
  HPReal arg() const { return gkp::atan2(im, re); }

  friend HPComplex operator+(const HPComplex& a, const HPComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend HPComplex operator-(const HPComplex& a, const HPComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend HPComplex operator*(const HPComplex& a, const HPComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend HPComplex operator*(const HPReal& s, const HPComplex& z) {
    return {s * z.re, s * z.im};
  }
  friend HPComplex operator/(const HPComplex& a, const HPReal& s) {
    return {a.re / s, a.im / s};
  }
  HPComplex operator-() const { return {-re, -im}; }
  HPComplex& operator+=(const HPComplex& o) { return *this = *this + o; }
  HPComplex& operator*=(const HPComplex& o) { return *this = *this * o; }
};

/// Precision policy for a whole computation: working mantissa width plus the
/// relative tolerance below which two evaluations count as equal. doubled()
/// yields the companion context used by the cancellation guard (alternating
/// sums are recomputed at twice the mantissa and must agree to 1e-10).
struct PrecisionContext {
  unsigned mantissa_bits = 256;
  double rel_tol = 1e-20;

  PrecisionContext() = default;
  PrecisionContext(unsigned bits, double tol) : mantissa_bits(bits), rel_tol(tol) {
    if (bits < 64) throw DomainError("PrecisionContext: mantissa_bits < 64");
  }

  mpfr_prec_t bits() const { return static_cast<mpfr_prec_t>(mantissa_bits); }
  PrecisionContext doubled() const { return {mantissa_bits * 2, rel_tol}; }

  HPReal real(double x) const { return HPReal::of(x, bits()); }
  HPReal real(long x) const { return HPReal::of(x, bits()); }
  HPReal real(int x) const { return HPReal::of(static_cast<long>(x), bits()); }
  HPReal parse(std::string_view s) const { return HPReal::parse(s, bits()); }

  HPReal zero() const { return real(0L); }
  HPReal one() const { return real(1L); }
  HPReal pi() const;
  HPReal sqrt_pi() const { return sqrt(pi()); }
  HPReal tolerance() const { return real(rel_tol); }
};

/// Guard shared by the alternating-sum evaluators: `value` computed at working
/// precision, `check` at doubled precision. Disagreement beyond rel 1e-10
/// means catastrophic cancellation at the working mantissa.
void require_stable(const HPReal& value, const HPReal& check, const char* what);

}  // namespace gkp
