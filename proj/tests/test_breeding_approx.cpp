#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkp/breeding_approx.hpp"
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

double rel_c(const HPComplex& a, const HPComplex& b) {
  HPReal diff = (a - b).abs();
  HPReal scale = max(a.abs(), b.abs());
  if (scale.is_zero()) return 0.0;
  return (diff / scale).to_double();
}

}  // namespace

TEST_CASE("bred wave matches the brute-force beam-splitter integral") {
  // Global phase and normalization cancel in the ratio w(q)/w(q0), so the
  // oracle and the implementation are compared point-by-point that way.
  HPReal q0 = ctx().real(0.3);
  for (int n : {7, 8}) {
    for (double pd : {0.0, 0.6}) {
      HPReal p = ctx().real(pd);
      CombWave wave = breed_wave(n, p, ctx()).wave;
      HPComplex base = wave.eval(q0);
      HPReal obase = oracle::bred_wave_raw(n, q0, p, ctx(), 1e-13);
      for (double qd : {0.9, 1.7, 2.6}) {
        HPReal q = ctx().real(qd);
        HPComplex got = wave.eval(q) * base.conj();
        got = got / base.norm2();
        HPReal want = oracle::bred_wave_raw(n, q, p, ctx(), 1e-13) / obase;
        CHECK(rel_c(got, HPComplex(want)) < 1e-10);
      }
    }
  }
}

TEST_CASE("homodyne density matches the brute-force nested quadrature") {
  for (double pd : {0.0, 0.6}) {
    HPReal p = ctx().real(pd);
    HPReal got = homodyne_density(7, p, ctx());
    HPReal want = oracle::bred_density_raw(7, p, ctx(), 1e-13);
    CHECK(rel(got, want) < 1e-10);
  }
}

TEST_CASE("outcome bundles are internally consistent") {
  ApproxBreeder breeder(9, ctx());
  CHECK(breeder.n() == 9);
  BreedOutcome at0 = breeder.breed(ctx().zero());
  for (double pd : {0.0, 0.45, 1.9}) {
    BreedOutcome out = breeder.breed(ctx().real(pd));
    CHECK(out.n == 9);
    CHECK(rel(out.p, ctx().real(pd)) == 0.0);
    CHECK(out.wave.norm_certificate());
    CHECK(rel(out.wave.norm2(), ctx().one()) < 1e-40);
    CHECK(out.density.sign() >= 0);
    // density = c N^2 with c independent of p, so ratios must match exactly.
    HPReal dens_ratio = out.density / at0.density;
    HPReal norm_ratio = (out.norm_N * out.norm_N) / (at0.norm_N * at0.norm_N);
    CHECK(rel(dens_ratio, norm_ratio) < 1e-40);
    // The free wrappers go through the same tables.
    CHECK(rel(homodyne_density(9, ctx().real(pd), ctx()), out.density) <
          1e-40);
  }
}

TEST_CASE("density and bred wave are even in the outcome") {
  ApproxBreeder breeder(8, ctx());
  for (double pd : {0.7, 1.9}) {
    HPReal p = ctx().real(pd);
    CHECK(rel(breeder.density(p), breeder.density(-p)) < 1e-30);
    HPComplex ov = overlap(breeder.breed(p).wave, breeder.breed(-p).wave);
    CHECK(std::abs(ov.abs().to_double() - 1.0) < 1e-12);
  }
}

TEST_CASE("momentum-side wave agrees with the Fourier integral") {
  CombWave mom = momentum_wave(7, ctx().real(0.6), ctx());
  CHECK(rel(mom.norm2(), ctx().one()) < 1e-10);
  CombWave pos = breed_wave(7, ctx().real(0.6), ctx()).wave;
  // Spot value: the real part of (1/sqrt(2 pi)) int pos(q) e^{-i p q} dq at a
  // fixed p, compared as a ratio to the same integral at p = 0 so that the
  // Fourier sign convention and global phase both cancel.
  auto fourier_re = [&](double pv) {
    HPReal p = ctx().real(pv);
    RealFn f = [&](const HPReal& q) { return pos.eval(q).re * cos(p * q); };
    return quad_oracle_line(f, 1e-13, ctx()).value;
  };
  HPReal want = fourier_re(0.4) / fourier_re(0.0);
  HPReal got = mom.eval(ctx().real(0.4)).re / mom.eval(ctx().zero()).re;
  CHECK(rel(got, want) < 1e-9);
}

TEST_CASE("witness sign decides the corrective displacement") {
  HPReal half = ctx().sqrt_pi() / ctx().real(2L);
  // Even order: heralding peaks at multiples of sqrt(pi).
  for (long l : {0L, 1L, 2L}) {
    HPReal peak = ctx().sqrt_pi() * ctx().real(l);
    DisplacementDecision d = corrective_delta(8, peak, ctx());
    CHECK(d.g_value.sign() > 0);
    CHECK(d.delta.is_zero());
    CHECK(d.theta.is_zero());
    DisplacementDecision mid = corrective_delta(8, peak + half, ctx());
    CHECK(mid.g_value.sign() < 0);
    CHECK(rel(mid.delta, half) == 0.0);
    CHECK(rel(mid.theta, ctx().pi()) == 0.0);
  }
  // Odd order: heralding peaks at odd multiples of sqrt(pi)/2, so p = 0 sits
  // between peaks.
  DisplacementDecision origin = corrective_delta(13, ctx().zero(), ctx());
  CHECK(origin.g_value.sign() < 0);
  CHECK(rel(origin.delta, half) == 0.0);
  DisplacementDecision peak13 = corrective_delta(13, half, ctx());
  CHECK(peak13.g_value.sign() > 0);
  CHECK(peak13.delta.is_zero());
}

TEST_CASE("displacement acts as a pure momentum phase") {
  ApproxBreeder breeder(8, ctx());
  HPReal p = ctx().real(0.35);
  CombWave base = breeder.breed(p).wave;
  for (double bd : {0.0, 1.1}) {
    HPReal beta = ctx().real(bd);
    CombWave disp = breeder.displaced_wave(p, beta);
    CHECK(disp.norm_certificate());
    HPComplex ov = overlap(disp, base.phase_multiplied(beta));
    CHECK(std::abs(ov.abs().to_double() - 1.0) < 1e-9);
  }
}

TEST_CASE("corrected output has vanishing mean phase") {
  for (double pd : {0.3, 1.9}) {
    HPReal phase = mean_phase_after_correction(8, ctx().real(pd), ctx());
    CHECK(abs(phase).to_double() < 1e-8);
  }
}

TEST_CASE("outputs are stable under precision doubling") {
  PrecisionContext lo(192, 1e-20);
  PrecisionContext hi(384, 1e-20);
  HPReal a = homodyne_density(9, lo.real(0.7), lo);
  HPReal b = homodyne_density(9, hi.real(0.7), hi);
  CHECK(rel(a, b) < 1e-30);
  HPReal ga = g_fn(12, lo.real(0.7), lo);
  HPReal gb = g_fn(12, hi.real(0.7), hi);
  CHECK(rel(ga, gb) < 1e-30);
}

TEST_CASE("order preconditions are enforced") {
  CHECK_THROWS_AS(ApproxBreeder(6, ctx()), DomainError);
  CHECK_THROWS_AS(breed_wave(6, ctx().zero(), ctx()), DomainError);
  CHECK_NOTHROW(ApproxBreeder(7, ctx()));
}
