#include "gkp/hp.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace gkp {

namespace {

void check_finite(mpfr_srcptr v, const char* op) {
  if (mpfr_nan_p(v) || mpfr_inf_p(v))
    throw CancellationError(std::string(op) + ": non-finite result");
}

mpfr_prec_t join(const HPReal& a, const HPReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

HPReal HPReal::of(double x, mpfr_prec_t prec) {
  HPReal r(prec);
  mpfr_set_d(r.v_, x, MPFR_RNDN);
  check_finite(r.v_, "of(double)");
  return r;
}

HPReal HPReal::of(long x, mpfr_prec_t prec) {
  HPReal r(prec);
  mpfr_set_si(r.v_, x, MPFR_RNDN);
  return r;
}

HPReal HPReal::parse(std::string_view s, mpfr_prec_t prec) {
  HPReal r(prec);
  std::string buf(s);
  if (mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0)
    throw DomainError("HPReal::parse: invalid decimal literal '" + buf + "'");
  return r;
}

HPReal HPReal::at_precision(mpfr_prec_t prec) const {
  HPReal r(prec);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string HPReal::str(int sig) const {
  if (sig < 2) sig = 2;
  std::vector<char> buf(static_cast<size_t>(sig) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", sig, v_);
  return std::string(buf.data());
}

HPReal operator+(const HPReal& a, const HPReal& b) {
  HPReal r(join(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  check_finite(r.raw(), "add");
  return r;
}

HPReal operator-(const HPReal& a, const HPReal& b) {
  HPReal r(join(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  check_finite(r.raw(), "sub");
  return r;
}

HPReal operator*(const HPReal& a, const HPReal& b) {
  HPReal r(join(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  check_finite(r.raw(), "mul");
  return r;
}

HPReal operator/(const HPReal& a, const HPReal& b) {
  HPReal r(join(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  check_finite(r.raw(), "div");
  return r;
}

HPReal HPReal::operator-() const {
  HPReal r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define GKP_UNARY(name, mpfr_fn)                 \
  HPReal name(const HPReal& x) {                 \
    HPReal r(x.precision());                     \
    mpfr_fn(r.raw(), x.raw(), MPFR_RNDN);        \
    check_finite(r.raw(), #name);                \
    return r;                                    \
  }

GKP_UNARY(abs, mpfr_abs)
GKP_UNARY(exp, mpfr_exp)
GKP_UNARY(sin, mpfr_sin)
GKP_UNARY(cos, mpfr_cos)
GKP_UNARY(sinh, mpfr_sinh)
GKP_UNARY(cosh, mpfr_cosh)
GKP_UNARY(tanh, mpfr_tanh)
GKP_UNARY(sech, mpfr_sech)
#undef GKP_UNARY

HPReal sqrt(const HPReal& x) {
  if (x.sign() < 0) throw DomainError("sqrt: negative argument");
  HPReal r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

HPReal log(const HPReal& x) {
  if (x.sign() <= 0) throw DomainError("log: non-positive argument");
  HPReal r(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

HPReal pow(const HPReal& x, long e) {
  HPReal r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), e, MPFR_RNDN);
  check_finite(r.raw(), "pow");
  return r;
}

HPReal pow(const HPReal& x, const HPReal& e) {
  HPReal r(join(x, e));
  mpfr_pow(r.raw(), x.raw(), e.raw(), MPFR_RNDN);
  check_finite(r.raw(), "pow");
  return r;
}

HPReal atan2(const HPReal& y, const HPReal& x) {
  HPReal r(join(y, x));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  check_finite(r.raw(), "atan2");
  return r;
}

HPReal acosh(const HPReal& x) {
  if (mpfr_cmp_si(x.raw(), 1) < 0) throw DomainError("acosh: argument < 1");
  HPReal r(x.precision());
  mpfr_acosh(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

HPReal asech(const HPReal& x) {
  if (x.sign() <= 0 || mpfr_cmp_si(x.raw(), 1) > 0)
    throw DomainError("asech: argument outside (0, 1]");
  return acosh(HPReal::of(1L, x.precision()) / x);
}

HPReal min(const HPReal& a, const HPReal& b) { return a < b ? a : b; }
HPReal max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }

bool rel_close(const HPReal& a, const HPReal& b, const HPReal& tol) {
  HPReal scale = max(abs(a), abs(b));
  if (scale.is_zero()) return true;
  return abs(a - b) <= tol * scale;
}

bool rel_close(const HPReal& a, const HPReal& b, double tol) {
  return rel_close(a, b, HPReal::of(tol, a.precision()));
}

HPReal PrecisionContext::pi() const {
  HPReal r(bits());
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

void require_stable(const HPReal& value, const HPReal& check, const char* what) {
  HPReal tol = HPReal::of(1e-10, 64);
  if (!rel_close(value, check.at_precision(value.precision()), tol))
    throw CancellationError(std::string(what) +
                            ": alternating sum unstable under precision "
                            "doubling; increase mantissa_bits");
}

}  // namespace gkp
