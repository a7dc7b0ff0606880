#include "gkp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace gkp {

namespace {

constexpr long kOracleBudget = 2000000;
constexpr int kOracleLevels = 14;

// Trapezoid sum over the DE-transformed axis. `g` maps the transform variable
// to integrand * Jacobian. Terms are cut once several consecutive magnitudes
// drop below cutoff * scale (several, to survive zeros of oscillatory
// integrands). The scale follows the largest term seen so the cut is relative
// to the integrand, not to the partial sum, and no direction may stop before
// |t| = 1: integrands with a high-order zero at the origin would otherwise
// never reach their support. `l1` reports h * sum |term| as a cancellation
// reference for the caller's convergence test.
HPReal de_trapezoid(const std::function<HPReal(const HPReal&)>& g,
                    const HPReal& h, const PrecisionContext& ctx, long* evals,
                    HPReal* l1) {
  HPReal sum = g(ctx.zero());
  HPReal mass = abs(sum);
  HPReal peak = abs(sum);
  *evals += 1;
  HPReal cutoff = ctx.real(1e-6) * ctx.tolerance();  // far below target tol
  double hd = h.to_double();
  for (int dir = -1; dir <= 1; dir += 2) {
    int quiet = 0;
    for (long j = 1;; ++j) {
      HPReal t = ctx.real(dir * j) * h;
      HPReal term = g(t);
      *evals += 1;
      sum += term;
      HPReal mag = abs(term);
      mass += mag;
      peak = max(peak, mag);
      bool small = term.is_zero() || mag < cutoff * max(abs(sum), peak);
      if (small && hd * static_cast<double>(j) >= 1.0) {
        if (++quiet >= 4) break;
      } else {
        quiet = 0;
      }
      if (*evals > kOracleBudget)
        throw ConvergenceError("quad_oracle: evaluation budget exhausted",
                               (h * sum).to_double());
    }
  }
  *l1 = h * mass;
  return h * sum;
}

QuadResult refine(const std::function<HPReal(const HPReal&)>& g, double tol,
                  const PrecisionContext& ctx) {
  long evals = 0;
  HPReal h = ctx.real(0.5);
  HPReal l1 = ctx.zero();
  HPReal prev = de_trapezoid(g, h, ctx, &evals, &l1);
  // Integrals cancelling below half the working mantissa (including exact
  // zeros) are converged once the residual sits at that rounding floor.
  HPReal floor_eps =
      ctx.real(std::ldexp(1.0, -static_cast<int>(ctx.bits()) / 2));
  for (int level = 0; level < kOracleLevels; ++level) {
    h = h / ctx.real(2L);
    HPReal cur = de_trapezoid(g, h, ctx, &evals, &l1);
    HPReal err = abs(cur - prev);
    if (err <= ctx.real(tol) * max(abs(cur), l1 * floor_eps))
      return {cur, err, evals};
    prev = cur;
  }
  throw ConvergenceError("quad_oracle: refinement did not converge",
                         prev.to_double());
}

}  // namespace

QuadResult quad_oracle(const RealFn& f, const HPReal& lo, const HPReal& hi,
                       double tol, const PrecisionContext& ctx) {
  if (!(lo < hi)) throw DomainError("quad_oracle: empty interval");
  HPReal mid = (lo + hi) / ctx.real(2L);
  HPReal half = (hi - lo) / ctx.real(2L);
  HPReal half_pi = ctx.pi() / ctx.real(2L);
  // x = mid + half * tanh((pi/2) sinh t)
  auto g = [&](const HPReal& t) {
    HPReal s = half_pi * sinh(t);
    HPReal c = cosh(s);
    HPReal x = mid + half * tanh(s);
    if (x <= lo || x >= hi) return ctx.zero();  // clamp rounding at the rim
    return f(x) * half * half_pi * cosh(t) / (c * c);
  };
  return refine(g, tol, ctx);
}

QuadResult quad_oracle_line(const RealFn& f, double tol,
                            const PrecisionContext& ctx) {
  // x = sinh(2t): Gaussian decay in x becomes double-exponential in t.
  auto g = [&](const HPReal& t) {
    HPReal two_t = ctx.real(2L) * t;
    return f(sinh(two_t)) * ctx.real(2L) * cosh(two_t);
  };
  return refine(g, tol, ctx);
}

namespace {

// Legendre P_m and its derivative at x, by the three-term recurrence.
std::pair<HPReal, HPReal> legendre(unsigned m, const HPReal& x,
                                   mpfr_prec_t prec) {
  HPReal p0 = HPReal::of(1L, prec), p1 = x.at_precision(prec);
  for (unsigned k = 2; k <= m; ++k) {
    HPReal pk = (HPReal::of(2L * k - 1, prec) * x * p1 -
                 HPReal::of(static_cast<long>(k) - 1, prec) * p0) /
                HPReal::of(static_cast<long>(k), prec);
    p0 = p1;
    p1 = pk;
  }
  HPReal one = HPReal::of(1L, prec);
  HPReal dp = HPReal::of(static_cast<long>(m), prec) * (x * p1 - p0) /
              (x * x - one);
  return {p1, dp};
}

std::mutex gl_mutex;
std::map<std::pair<unsigned, mpfr_prec_t>, GLRule> gl_cache;

GLRule make_gl_rule(unsigned order, mpfr_prec_t prec) {
  GLRule rule;
  rule.nodes.reserve(order);
  rule.weights.reserve(order);
  // Newton from Chebyshev seeds; quadratic convergence reaches `prec` bits in
  // O(log prec) steps.
  int steps = 10 + static_cast<int>(std::log2(static_cast<double>(prec)));
  for (unsigned i = 0; i < order; ++i) {
    double seed = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    HPReal x = HPReal::of(seed, prec);
    for (int it = 0; it < steps; ++it) {
      auto [p, dp] = legendre(order, x, prec);
      x = x - p / dp;
    }
    auto [p, dp] = legendre(order, x, prec);
    (void)p;
    HPReal one = HPReal::of(1L, prec);
    rule.nodes.push_back(x);
    rule.weights.push_back(HPReal::of(2L, prec) / ((one - x * x) * dp * dp));
  }
  return rule;
}

}  // namespace

const GLRule& gl_rule(unsigned order, mpfr_prec_t prec) {
  std::lock_guard<std::mutex> lock(gl_mutex);
  auto key = std::make_pair(order, prec);
  auto it = gl_cache.find(key);
  if (it == gl_cache.end())
    it = gl_cache.emplace(key, make_gl_rule(order, prec)).first;
  return it->second;
}

namespace {

HPReal gl_panel(const RealFn& f, const HPReal& a, const HPReal& b,
                unsigned order, const PrecisionContext& ctx, long* evals) {
  const GLRule& rule = gl_rule(order, ctx.bits());
  HPReal mid = (a + b) / ctx.real(2L);
  HPReal half = (b - a) / ctx.real(2L);
  HPReal sum = ctx.zero();
  for (unsigned i = 0; i < order; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  *evals += order;
  return half * sum;
}

struct Panel {
  HPReal a, b, coarse, fine, err;
};

}  // namespace

QuadResult gl_integrate(const RealFn& f, const HPReal& lo, const HPReal& hi,
                        double tol, const PrecisionContext& ctx) {
  if (!(lo < hi)) throw DomainError("gl_integrate: empty interval");
  long evals = 0;
  auto make_panel = [&](const HPReal& a, const HPReal& b) {
    Panel p{a, b, gl_panel(f, a, b, 16, ctx, &evals),
            gl_panel(f, a, b, 32, ctx, &evals), ctx.zero()};
    p.err = abs(p.fine - p.coarse);
    return p;
  };
  std::vector<Panel> panels;
  panels.push_back(make_panel(lo, hi));
  constexpr size_t kMaxPanels = 4096;
  while (true) {
    HPReal total = ctx.zero(), err = ctx.zero();
    size_t worst = 0;
    for (size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].fine;
      err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    if (err <= ctx.real(tol) * max(abs(total), ctx.real(1e-300)))
      return {total, err, evals};
    if (panels.size() >= kMaxPanels)
      throw ConvergenceError("gl_integrate: panel budget exhausted",
                             total.to_double());
    Panel split = panels[worst];
    HPReal mid = (split.a + split.b) / ctx.real(2L);
    panels[worst] = make_panel(split.a, mid);
    panels.push_back(make_panel(mid, split.b));
  }
}

}  // namespace gkp
