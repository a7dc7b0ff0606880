#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkp/breeding_exact.hpp"
#include "gkp/errors.hpp"
#include "gkp/hp.hpp"
#include "gkp/metrics.hpp"
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

}  // namespace

TEST_CASE("peak outcomes follow the parity rule") {
  HPReal sp = ctx().sqrt_pi();
  CHECK(exact_peak_outcome(10, 0, ctx()).is_zero());
  CHECK(rel(exact_peak_outcome(10, 2, ctx()), ctx().real(2L) * sp) == 0.0);
  CHECK(rel(exact_peak_outcome(13, 0, ctx()), sp / ctx().real(2L)) == 0.0);
  CHECK(rel(exact_peak_outcome(13, 1, ctx()), ctx().real(3L) * sp /
                                                  ctx().real(2L)) == 0.0);
}

TEST_CASE("exact density integrates to one") {
  // Completeness over outcomes, checked with the independent integrator and
  // a cutoff far past the envelope decay.
  for (int kappa : {0, 1}) {
    HPReal r = ctx().real(0.55);
    RealFn f = [&](const HPReal& p) {
      return exact_homodyne_density(kappa, r, p, ctx());
    };
    HPReal mass = ctx().real(2L) *
                  quad_oracle(f, ctx().zero(), ctx().real(16L), 1e-12, ctx())
                      .value;
    CHECK(rel(mass, ctx().one()) < 1e-10);
  }
}

TEST_CASE("density is even and positive") {
  HPReal r = ctx().real(0.7);
  for (double pd : {0.2, 0.9, 2.3}) {
    HPReal p = ctx().real(pd);
    CHECK(rel(exact_homodyne_density(0, r, p, ctx()),
              exact_homodyne_density(0, r, -p, ctx())) < 1e-30);
    CHECK(exact_homodyne_density(1, r, p, ctx()).sign() > 0);
  }
}

TEST_CASE("ideal target has unit norm by quadrature") {
  for (double rd : {0.3, 0.8}) {
    CombWave ideal = exact_ideal_wave(ctx().real(rd), ctx());
    RealFn f = [&](const HPReal& q) { return ideal.eval(q).norm2(); };
    HPReal n2 = quad_oracle_line(f, 1e-13, ctx()).value;
    CHECK(rel(n2, ctx().one()) < 1e-12);
  }
}

TEST_CASE("bred state at a heralding peak is exactly the ideal target") {
  for (int kappa : {10, 13}) {
    HPReal r = r_opt(kappa, ctx());
    for (long l : {0L, 1L}) {
      HPReal peak = exact_peak_outcome(kappa, l, ctx());
      ExactBreedOutcome out = exact_breed_wave(kappa, r, peak, ctx());
      CHECK(out.g_tilde.sign() > 0);
      CHECK(out.delta_tilde.is_zero());
      HPReal fid = fidelity_pure(out.wave,
                                 exact_ideal_wave(r, ctx()).normalized());
      CHECK(std::abs(fid.to_double() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("between peaks the witness flips and the shift is half a period") {
  HPReal half = ctx().sqrt_pi() / ctx().real(2L);
  HPReal r = ctx().real(0.6);
  // kappa even: midpoints at odd multiples of sqrt(pi)/2.
  ExactBreedOutcome mid0 = exact_breed_wave(0, r, half, ctx());
  CHECK(mid0.g_tilde.sign() < 0);
  CHECK(rel(mid0.delta_tilde, half) == 0.0);
  CHECK(rel(mid0.theta, ctx().pi()) == 0.0);
  // kappa odd: p = 0 is a midpoint.
  ExactBreedOutcome mid1 = exact_breed_wave(1, r, ctx().zero(), ctx());
  CHECK(mid1.g_tilde.sign() < 0);
  CHECK(rel(mid1.delta_tilde, half) == 0.0);
}

TEST_CASE("outcome fields echo the call") {
  HPReal r = ctx().real(0.8);
  HPReal p = ctx().real(0.37);
  ExactBreedOutcome out = exact_breed_wave(7, r, p, ctx());
  CHECK(out.kappa == 1);  // parity of 7
  CHECK(rel(out.r, r) == 0.0);
  CHECK(rel(out.p, p) == 0.0);
  CHECK(out.wave.norm_certificate());
  CHECK(rel(out.wave.norm2(), ctx().one()) < 1e-40);
  CHECK(rel(out.density, exact_homodyne_density(7, r, p, ctx())) < 1e-40);
  CHECK(rel(out.g_tilde, exact_g(7, r, p, ctx())) < 1e-40);
}

TEST_CASE("density peaks sit near the heralding outcomes") {
  // The envelope pulls local maxima inward by at most ~0.2; see the
  // validation suite for a sweep.  One spot probe here.
  int kappa = 12;
  HPReal r = r_opt(kappa, ctx());
  HPReal peak = exact_peak_outcome(kappa, 1, ctx());
  HPReal quarter = ctx().sqrt_pi() / ctx().real(4L);
  HPReal best_p = peak;
  HPReal best = exact_homodyne_density(kappa, r, peak, ctx());
  for (int i = -20; i <= 20; ++i) {
    HPReal p = peak + quarter * ctx().real(i) / ctx().real(20L);
    HPReal d = exact_homodyne_density(kappa, r, p, ctx());
    if (d > best) {
      best = d;
      best_p = p;
    }
  }
  CHECK(abs(best_p - peak).to_double() < 0.2);
}

TEST_CASE("approximate breeding converges to the exact protocol") {
  HPReal prev = approx_vs_exact_fidelity(7, ctx().zero(), ctx());
  CHECK(prev.to_double() > 0.8);
  for (int n : {12, 20}) {
    HPReal fid = approx_vs_exact_fidelity(n, ctx().zero(), ctx());
    CHECK(fid.to_double() >= prev.to_double() - 1e-9);
    prev = fid;
  }
  CHECK(prev.to_double() > 0.99);
}

TEST_CASE("density divergence shrinks with the subtraction order") {
  auto grid = uniform_grid(ctx().real(-4L) * ctx().sqrt_pi(),
                           ctx().real(4L) * ctx().sqrt_pi(), 201);
  KLResult kl7 = kl_divergence_vs_exact(7, grid, ctx());
  KLResult kl15 = kl_divergence_vs_exact(15, grid, ctx());
  CHECK(kl7.value.sign() >= 0);
  CHECK(kl15.value.sign() >= 0);
  CHECK(kl15.value < kl7.value);
}

TEST_CASE("degenerate and out-of-domain arguments are rejected") {
  CHECK_THROWS_AS(exact_breed_wave(0, ctx().real(-0.2), ctx().zero(), ctx()),
                  DomainError);
  CHECK_THROWS_AS(exact_homodyne_density(0, ctx().zero(), ctx().zero(), ctx()),
                  DomainError);
}
