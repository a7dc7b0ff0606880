#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkp/errors.hpp"
#include "gkp/hp.hpp"
#include "gkp/quadrature.hpp"
#include "gkp/states.hpp"
#include "gkp/wave.hpp"
#include "support/oracles.hpp"

using namespace gkp;

namespace {

const PrecisionContext& ctx() {
  static PrecisionContext c(256, 1e-20);
  return c;
}

double rel(const HPReal& a, const HPReal& b) {
  HPReal diff = abs(a - b);
  HPReal scale = max(abs(a), abs(b));
  if (scale.is_zero()) return 0.0;
  return (diff / scale).to_double();
}

HPReal norm2_by_quadrature(const CombWave& w) {
  RealFn f = [&](const HPReal& q) { return w.eval(q).norm2(); };
  return quad_oracle_line(f, 1e-14, ctx()).value;
}

}  // namespace

TEST_CASE("squeezing conversions are mutually inverse with the dB spot value") {
  HPReal xi = ctx().real(0.87);
  CHECK(rel(xi_from_db(xi_to_db(xi)), xi) < 1e-40);
  // 10 dB: xi = 10 ln(10) / 20.
  HPReal want = ctx().real(10L) * log(ctx().real(10L)) / ctx().real(20L);
  CHECK(rel(xi_from_db(ctx().real(10L)), want) < 1e-40);
  CHECK(xi_from_db(ctx().real(10L)).to_double() ==
        doctest::Approx(1.151292546497023).epsilon(1e-12));
}

TEST_CASE("squeezing parameters satisfy their inverse identities") {
  for (int n : {7, 13, 40}) {
    // sech(2 r_opt(n)) = 2 pi / n.
    HPReal lhs = sech(ctx().real(2L) * r_opt(n, ctx()));
    HPReal rhs = ctx().real(2L) * ctx().pi() / ctx().real(n);
    CHECK(rel(lhs, rhs) < 1e-30);
  }
  for (int n : {1, 5, 40}) {
    // cosh(2 r_max(n)) = 2n + 1.
    HPReal lhs = cosh(ctx().real(2L) * r_max(n, ctx()));
    CHECK(rel(lhs, ctx().real(2L * n + 1)) < 1e-30);
    // e^{-2 r_crit(n)} = 2 pi (2n+1) / n.
    HPReal crit = exp(ctx().real(-2L) * r_crit(n, ctx()));
    HPReal want = ctx().real(2L) * ctx().pi() * ctx().real(2L * n + 1) /
                  ctx().real(n);
    CHECK(rel(crit, want) < 1e-30);
  }
  // r_max(1) = acosh(3)/2 = ln(3 + sqrt(8))/2.
  HPReal want = log(ctx().real(3L) + sqrt(ctx().real(8L))) / ctx().real(2L);
  CHECK(rel(r_max(1, ctx()), want) < 1e-30);
}

TEST_CASE("heralding probability matches the closed form") {
  for (int n = 1; n <= 10; ++n)
    CHECK(rel(p_gps(n, ctx()), oracle::p_gps_closed(n, ctx())) < 1e-24);
  // Algebraic spot values: p_gps(1) = 3^{-3/2}, p_gps(2) = 6 / (25 sqrt 5).
  HPReal v1 = ctx().one() / (ctx().real(3L) * sqrt(ctx().real(3L)));
  HPReal v2 = ctx().real(6L) / (ctx().real(25L) * sqrt(ctx().real(5L)));
  CHECK(rel(p_gps(1, ctx()), v1) < 1e-24);
  CHECK(rel(p_gps(2, ctx()), v2) < 1e-24);
  CHECK(p_gps(2, ctx()).to_double() == doctest::Approx(0.10733).epsilon(5e-5));
  // Monotone decreasing in n.
  for (int n = 1; n < 10; ++n)
    CHECK(p_gps(n + 1, ctx()) < p_gps(n, ctx()));
}

TEST_CASE("subtracted-state wave matches its defining formula pointwise") {
  for (int n : {7, 10}) {
    CombWave w = gps_wave(n, ctx());
    CHECK(rel(w.norm2(), ctx().one()) < 1e-40);
    CHECK(rel(norm2_by_quadrature(w), ctx().one()) < 1e-12);
    // Direct evaluation: sign * rate^{(2n+1)/4} / sqrt(Gamma(n+1/2)) * q^n
    // e^{-rate q^2 / 2}, rate = n / 2 pi, sign = (-1)^n.
    HPReal rate = ctx().real(n) / (ctx().real(2L) * ctx().pi());
    HPReal coeff = pow(rate, (ctx().real(2L * n) + ctx().one()) /
                                 ctx().real(4L)) /
                   sqrt(oracle::gamma_stirling(ctx().real(n) + ctx().real(0.5),
                                               ctx()));
    for (double q : {0.4, 1.3, -2.2}) {
      HPReal qq = ctx().real(q);
      HPReal want = coeff * pow(-qq, static_cast<long>(n)) *
                    exp(-rate * qq * qq / ctx().real(2L));
      HPComplex got = w.eval(qq);
      CHECK(rel(got.re, want) < 1e-22);
      CHECK(abs(got.im).to_double() < 1e-40);
    }
    // Parity (-1)^n.
    HPComplex plus = w.eval(ctx().real(1.7));
    HPComplex minus = w.eval(ctx().real(-1.7));
    HPReal expect = n % 2 == 0 ? minus.re : -minus.re;
    CHECK(rel(plus.re, expect) == 0.0);
  }
}

TEST_CASE("grid state combs are normalized with the documented teeth") {
  for (double x : {0.8, 1.15}) {
    HPReal xi = ctx().real(x);
    CombWave w = gkp_wave(xi, ctx());
    CHECK(w.norm_certificate());
    CHECK(rel(w.norm2(), ctx().one()) < 1e-40);
    CHECK(rel(norm2_by_quadrature(w), ctx().one()) < 1e-12);
    // Tooth ratio psi(2 sqrt(pi))/psi(0) = e^{-2 pi e^{-2 xi}} up to
    // neighbor-tooth leakage.
    HPReal spacing = ctx().real(2L) * ctx().sqrt_pi();
    HPReal ratio = w.eval(spacing).re / w.eval(ctx().zero()).re;
    HPReal want = exp(-ctx().real(2L) * ctx().pi() *
                      exp(-ctx().real(2L) * xi));
    CHECK(rel(ratio, want) < 1e-10);
    // Even in q (tooth summation order differs, so last bits may move).
    CHECK(rel(w.eval(ctx().real(2.9)).re, w.eval(ctx().real(-2.9)).re) < 1e-70);
  }
}

TEST_CASE("adaptive tooth count is stable under one extra tooth") {
  HPReal xi = ctx().real(0.8);
  int m = gkp_tooth_count(xi, ctx());
  CHECK(m >= 1);
  CHECK(m <= 64);
  CombWave a = gkp_wave(xi, m, ctx());
  CombWave b = gkp_wave(xi, m + 1, ctx());
  HPComplex ov = overlap(a, b);
  CHECK(std::abs(ov.abs().to_double() - 1.0) < 1e-10);
}

TEST_CASE("squeezed cat superpositions have the stated parity and norm") {
  HPReal alpha = ctx().real(1.5);
  HPReal r = ctx().real(0.5);
  for (int kappa : {0, 1, 2, 3}) {
    CombWave w = scss_wave(kappa, alpha, r, ctx());
    CHECK(rel(w.norm2(), ctx().one()) < 1e-40);
    CHECK(rel(norm2_by_quadrature(w), ctx().one()) < 1e-12);
    HPComplex plus = w.eval(ctx().real(0.9));
    HPComplex minus = w.eval(ctx().real(-0.9));
    if (kappa % 2 == 0) {
      CHECK(rel(plus.re, minus.re) == 0.0);
    } else {
      CHECK(rel(plus.re, -minus.re) == 0.0);
      CHECK(w.eval(ctx().zero()).abs().to_double() < 1e-40);
    }
  }
}

TEST_CASE("domain preconditions are enforced") {
  CHECK_THROWS_AS(gps_wave(6, ctx()), DomainError);
  CHECK_THROWS_AS(r_opt(6, ctx()), DomainError);
  CHECK_THROWS_AS(r_max(0, ctx()), DomainError);
  CHECK_THROWS_AS(p_gps(0, ctx()), DomainError);
  CHECK_THROWS_AS(gkp_wave(ctx().real(-0.1), ctx()), DomainError);
  CHECK_THROWS_AS(scss_wave(0, ctx().real(-1L), ctx().one(), ctx()),
                  DomainError);
  CHECK_NOTHROW(gps_wave(7, ctx()));
  CHECK_NOTHROW(r_opt(7, ctx()));
}
