#pragma once
// Independent reference computations for the tests.  Everything here
// deliberately avoids the closed-form code paths under test (Gaussian-moment
// algebra, lattice resummation, Gram-matrix norms) and instead uses direct
// quadrature, classical series with explicit error control, and exact integer
// arithmetic.  Tolerances quoted per helper are the achievable oracle
// accuracy, not the acceptance bound.

#include <vector>

#include "gkp/hp.hpp"
#include "gkp/quadrature.hpp"

namespace oracle {

using gkp::HPComplex;
using gkp::HPReal;
using gkp::PrecisionContext;
using gkp::QuadResult;
using gkp::RealFn;

// ln Gamma(x) for x > 0 via the Stirling series at the shifted argument
// z = x + 24 with Bernoulli terms through B_20, then downward recursion.
// Absolute series truncation error < |B_22| / (22*21*24^21) ~ 1e-26.
inline HPReal lgamma_stirling(const HPReal& x, const PrecisionContext& ctx) {
  // B_{2k} for k = 1..10 as exact rationals.
  static const long bnum[10] = {1, -1, 1, -1, 5, -691, 7, -3617, 43867,
                                -174611};
  static const long bden[10] = {6, 30, 42, 30, 66, 2730, 6, 510, 798, 330};
  const long kShift = 24;
  HPReal z = x.at_precision(ctx.bits()) + ctx.real(kShift);
  HPReal half = ctx.real(0.5);
  HPReal acc = (z - half) * log(z) - z +
               half * log(ctx.real(2L) * ctx.pi());
  HPReal zpow = z;  // z^{2k-1}
  HPReal z2 = z * z;
  for (int k = 1; k <= 10; ++k) {
    acc = acc + ctx.real(bnum[k - 1]) /
                    (ctx.real(bden[k - 1]) * ctx.real(2L * k) *
                     ctx.real(2L * k - 1) * zpow);
    zpow = zpow * z2;
  }
  // Gamma(x) = Gamma(x + 24) / (x (x+1) ... (x+23)).
  for (long j = 0; j < kShift; ++j)
    acc = acc - log(x.at_precision(ctx.bits()) + ctx.real(j));
  return acc;
}

inline HPReal gamma_stirling(const HPReal& x, const PrecisionContext& ctx) {
  return exp(lgamma_stirling(x, ctx));
}

// Exact integer binomial coefficient by Pascal's rule; fits in long long for
// the orders used in the tests (2n <= 64).
inline long long pascal_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<long long> row(static_cast<size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<size_t>(j)] += row[static_cast<size_t>(j - 1)];
  return row[static_cast<size_t>(k)];
}

inline long long double_factorial_odd(int k) {
  // (2k-1)!! with the empty product = 1.
  long long v = 1;
  for (int j = 1; j <= k; ++j) v *= 2 * j - 1;
  return v;
}

// Heralding probability of the n-photon subtraction, in closed form
// C(2n,n) n^n / (2^n (2n+1)^{n+1/2}), evaluated through exp/log so the
// power/factorial primitives differ from the library path.  Valid for
// n <= 16 (the binomial must stay exactly representable in a double).
inline HPReal p_gps_closed(int n, const PrecisionContext& ctx) {
  HPReal ln = ctx.real(static_cast<double>(pascal_binomial(2 * n, n)));
  ln = log(ln);
  ln = ln + ctx.real(n) * log(ctx.real(n));
  ln = ln - ctx.real(n) * log(ctx.real(2L));
  ln = ln - (ctx.real(n) + ctx.real(0.5)) * log(ctx.real(2L * n + 1));
  return exp(ln);
}

// ---------------------------------------------------------------------------
// Brute-force breeding: two unit-norm subtracted states psi(u) ~ u^n
// e^{-(n/4pi) u^2} interfere on a balanced beam splitter and the difference
// mode is projected on the momentum eigenstate <p| with <p|q> =
// e^{ipq}/sqrt(2pi).  Everything below is plain nested quadrature over the
// defining integrals; no moment tables, no resummation.

// Unnormalized kept-mode wave after the measurement (real by symmetry):
//   w(q) = (2/sqrt(2pi)) * int_0^inf ((q^2-t^2)/2)^n e^{-(n/4pi)(q^2+t^2)}
//          cos(p t) dt
inline HPReal bred_wave_raw(int n, const HPReal& q, const HPReal& p,
                            const PrecisionContext& ctx, double tol) {
  HPReal rate = ctx.real(n) / (ctx.real(4L) * ctx.pi());
  HPReal q2 = q * q;
  RealFn f = [&](const HPReal& t) {
    HPReal body = pow((q2 - t * t) / ctx.real(2L), static_cast<long>(n));
    return body * exp(-rate * (q2 + t * t)) * cos(p * t);
  };
  QuadResult r = gkp::quad_oracle_line(f, tol, ctx);
  return r.value / sqrt(ctx.real(2L) * ctx.pi());
}

// Squared norm of one unnormalized input, int u^{2n} e^{-(n/2pi) u^2} du.
inline HPReal gps_raw_norm2(int n, const PrecisionContext& ctx, double tol) {
  HPReal rate = ctx.real(n) / (ctx.real(2L) * ctx.pi());
  RealFn f = [&](const HPReal& u) {
    return pow(u, 2L * static_cast<long>(n)) * exp(-rate * u * u);
  };
  return gkp::quad_oracle_line(f, tol, ctx).value;
}

// Normalized homodyne density at outcome p: ||w||^2 over the two input
// norms.  Integrates the wave oracle once more, so the cost is one nested
// quadrature; accuracy is limited by tol of the inner pass.
inline HPReal bred_density_raw(int n, const HPReal& p,
                               const PrecisionContext& ctx, double tol) {
  RealFn f = [&](const HPReal& q) {
    HPReal w = bred_wave_raw(n, q, p, ctx, tol);
    return w * w;
  };
  HPReal raw = gkp::quad_oracle_line(f, tol, ctx).value;
  HPReal n2 = gps_raw_norm2(n, ctx, tol);
  return raw / (n2 * n2);
}

// ---------------------------------------------------------------------------
// Shift-error mass with the v-integral done numerically: the lattice series
// is truncated explicitly and |sum_s e^{-i 2 sqrt(pi) v s} psi(u + 2 sqrt(pi)
// s)|^2 is integrated over the value window in both u and v.  Only the
// point-evaluation psi.eval is shared with the implementation.
template <typename Wave>
inline HPReal gk_no_error_bruteforce(const Wave& psi, long shells,
                                     const PrecisionContext& ctx, double tol) {
  HPReal sp = ctx.sqrt_pi();
  HPReal step = ctx.real(2L) * sp;
  HPReal vhalf = sp / ctx.real(6L);
  RealFn outer = [&](const HPReal& u) {
    std::vector<HPComplex> vals;
    for (long s = -shells; s <= shells; ++s)
      vals.push_back(psi.eval(u + step * ctx.real(s)));
    RealFn inner = [&](const HPReal& v) {
      HPComplex acc = HPComplex::zero(ctx.bits());
      for (long s = -shells; s <= shells; ++s) {
        HPReal phase = -step * v * ctx.real(s);
        acc += vals[static_cast<size_t>(s + shells)] *
               HPComplex::unit_phase(phase);
      }
      return acc.norm2();
    };
    return gkp::quad_oracle(inner, -vhalf, vhalf, tol, ctx).value;
  };
  HPReal mass = gkp::quad_oracle(outer, -vhalf, vhalf, tol, ctx).value;
  return mass / sp;
}

}  // namespace oracle
