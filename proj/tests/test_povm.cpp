#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkp/breeding_approx.hpp"
#include "gkp/breeding_exact.hpp"
#include "gkp/errors.hpp"
#include "gkp/hp.hpp"
#include "gkp/metrics.hpp"
#include "gkp/povm.hpp"
#include "gkp/quadrature.hpp"
#include "gkp/states.hpp"

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

TEST_CASE("window probability equals the density integral") {
  ApproxBreeder breeder(8, ctx());
  HPReal eps = ctx().real(0.12);
  HPReal wp = window_probability(breeder, ctx().zero(), eps);
  RealFn dens = [&](const HPReal& p) { return breeder.density(p); };
  HPReal want = quad_oracle(dens, -eps, eps, 1e-12, ctx()).value;
  CHECK(rel(wp, want) < 1e-9);
  // Adjacent windows add up.
  HPReal split = window_probability(breeder, ctx().real(-0.1), ctx().real(0.1)) +
                 window_probability(breeder, ctx().real(0.1), ctx().real(0.1));
  HPReal whole = window_probability(breeder, ctx().zero(), ctx().real(0.2));
  CHECK(rel(split, whole) < 1e-10);
  // The int-order wrapper matches the breeder overload.
  CHECK(rel(window_probability(8, ctx().zero(), eps, ctx()), wp) < 1e-30);
}

TEST_CASE("finite-resolution kernel carries the window and unit trace") {
  FiniteResState st =
      finite_res_state(ApproxSource{8}, ctx().zero(), ctx().real(0.1), 15,
                       ctx());
  CHECK(st.kernel.rank() == 15);
  CHECK(rel(st.kernel.trace(), ctx().one()) < 1e-8);
  CHECK(rel(st.kernel.window_center(), ctx().zero()) == 0.0);
  CHECK(rel(st.kernel.window_halfwidth(), ctx().real(0.1)) == 0.0);
  for (const auto& t : st.kernel.terms()) {
    CHECK(t.weight.sign() >= 0);
    CHECK(t.wave.norm_certificate());
  }
  HPReal wp = window_probability(8, ctx().zero(), ctx().real(0.1), ctx());
  CHECK(rel(st.probability, wp) < 1e-8);
}

TEST_CASE("sharp windows recover the pure state") {
  ApproxBreeder breeder(8, ctx());
  CombWave center = breeder.breed(ctx().zero()).wave;
  FiniteResState st = finite_res_state(ApproxSource{8}, ctx().zero(),
                                       ctx().real(1e-4), 9, ctx());
  HPReal fid = fidelity_pure_mixed(center, st.kernel);
  CHECK(fid.to_double() > 1.0 - 1e-6);
}

TEST_CASE("finite resolution keeps high fidelity at the working window") {
  ApproxBreeder breeder(8, ctx());
  CombWave center = breeder.breed(ctx().zero()).wave;
  // Converged value (stable under node and precision doubling); the curve
  // crosses 0.999 just below this width, near eps = 0.1497.
  FiniteResState st = finite_res_state(ApproxSource{8}, ctx().zero(),
                                       ctx().real(0.15), 21, ctx());
  double fid = fidelity_pure_mixed(center, st.kernel).to_double();
  CHECK(fid == doctest::Approx(0.998997804221).epsilon(1e-9));
  FiniteResState tight = finite_res_state(ApproxSource{8}, ctx().zero(),
                                          ctx().real(0.12), 21, ctx());
  CHECK(fidelity_pure_mixed(center, tight.kernel).to_double() >= 0.999);
}

TEST_CASE("fidelity does not increase with the window width") {
  ApproxBreeder breeder(8, ctx());
  CombWave center = breeder.breed(ctx().zero()).wave;
  double prev = 2.0;
  for (double e : {0.03, 0.09, 0.15}) {
    FiniteResState st = finite_res_state(ApproxSource{8}, ctx().zero(),
                                         ctx().real(e), 15, ctx());
    double fid = fidelity_pure_mixed(center, st.kernel).to_double();
    CHECK(fid <= prev + 1e-12);
    prev = fid;
  }
}

TEST_CASE("exact source windows behave like the approximate ones") {
  HPReal r = r_opt(10, ctx());
  ExactSource src{10, r};
  HPReal peak = exact_peak_outcome(10, 1, ctx());
  FiniteResState st = finite_res_state(src, peak, ctx().real(0.15), 21, ctx());
  CHECK(st.probability.sign() > 0);
  CHECK(st.probability < ctx().one());
  CombWave center = exact_breed_wave(10, r, peak, ctx()).wave;
  CHECK(fidelity_pure_mixed(center, st.kernel).to_double() >= 0.999);
  // Window integral against the exact density.
  RealFn dens = [&](const HPReal& p) {
    return exact_homodyne_density(10, r, p, ctx());
  };
  HPReal want = quad_oracle(dens, peak - ctx().real(0.15),
                            peak + ctx().real(0.15), 1e-12, ctx())
                    .value;
  CHECK(rel(st.probability, want) < 1e-8);
}

TEST_CASE("node doubling leaves the mixture fidelity unchanged") {
  ApproxBreeder breeder(8, ctx());
  CombWave center = breeder.breed(ctx().zero()).wave;
  FiniteResState a = finite_res_state(ApproxSource{8}, ctx().zero(),
                                      ctx().real(0.15), 15, ctx());
  FiniteResState b = finite_res_state(ApproxSource{8}, ctx().zero(),
                                      ctx().real(0.15), 30, ctx());
  double fa = fidelity_pure_mixed(center, a.kernel).to_double();
  double fb = fidelity_pure_mixed(center, b.kernel).to_double();
  CHECK(std::abs(fa - fb) < 1e-9);
}

TEST_CASE("invalid windows and node counts are rejected") {
  CHECK_THROWS_AS(finite_res_state(ApproxSource{8}, ctx().zero(),
                                   ctx().zero(), 15, ctx()),
                  DomainError);
  CHECK_THROWS_AS(finite_res_state(ApproxSource{8}, ctx().zero(),
                                   ctx().real(-0.1), 15, ctx()),
                  DomainError);
  CHECK_THROWS_AS(finite_res_state(ApproxSource{8}, ctx().zero(),
                                   ctx().real(0.1), 4, ctx()),
                  DomainError);
}
