#pragma once

#include <functional>
#include <vector>

#include "gkp/hp.hpp"

namespace gkp {

using RealFn = std::function<HPReal(const HPReal&)>;

struct QuadResult {
  HPReal value;
  HPReal error_estimate;
  long evaluations = 0;
};

/// Reference integrator for tests and cross-checks only; production code never
/// calls it. Double-exponential change of variables (tanh-sinh on finite
/// intervals, sinh on the real line, so Gaussian tails decay
/// double-exponentially) followed by trapezoid refinement. `tol` is relative
/// to the integral magnitude; the estimate is |I_h - I_{h/2}| of the last
/// refinement. Budget exhaustion raises ConvergenceError carrying the best
/// estimate.
QuadResult quad_oracle(const RealFn& f, const HPReal& lo, const HPReal& hi,
                       double tol, const PrecisionContext& ctx);

/// quad_oracle over the whole real line.
QuadResult quad_oracle_line(const RealFn& f, double tol,
                            const PrecisionContext& ctx);

/// Gauss-Legendre nodes and weights on [-1, 1] at the context precision,
/// by Newton refinement of double-precision Chebyshev seeds. Results are
/// memoized per (order, precision).
struct GLRule {
  std::vector<HPReal> nodes;
  std::vector<HPReal> weights;
};
const GLRule& gl_rule(unsigned order, mpfr_prec_t prec);

/// Production integrator: adaptive panel subdivision with nested 16/32-node
/// Gauss-Legendre rules; per-panel error is their difference. Splits the
/// worst panel until the summed estimate drops below tol (relative).
QuadResult gl_integrate(const RealFn& f, const HPReal& lo, const HPReal& hi,
                        double tol, const PrecisionContext& ctx);

}  // namespace gkp
