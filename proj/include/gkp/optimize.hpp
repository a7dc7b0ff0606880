#pragma once

#include <array>
#include <functional>

#include "gkp/quadrature.hpp"

namespace gkp {

struct ScalarMax {
  HPReal x;
  HPReal value;
};

/// Golden-section maximization of a unimodal-enough objective on [lo, hi];
/// stops when the bracket is narrower than tol_abs. Deterministic.
ScalarMax golden_section_max(const RealFn& f, const HPReal& lo,
                             const HPReal& hi, double tol_abs);

/// Largest x in [lo, hi] with pred(x) true, assuming pred(lo) is true and the
/// predicate flips at most once (monotone boundary). Returns lo if pred flips
/// immediately, hi if it never does. Bisection to absolute width tol_abs.
HPReal bisect_predicate(const std::function<bool(const HPReal&)>& pred,
                        const HPReal& lo, const HPReal& hi, double tol_abs);

/// Root of f(x) = target on [lo, hi] given f(lo) - target and f(hi) - target
/// have opposite signs. Bisection to absolute width tol_abs in x.
HPReal bisect_crossing(const RealFn& f, const HPReal& lo, const HPReal& hi,
                       const HPReal& target, double tol_abs);

struct SimplexResult {
  std::array<double, 2> x;
  double value;
  bool converged;
};

/// Derivative-free Nelder-Mead maximization in two clamped parameters.
/// The objective sees coordinates already clamped to [lo, hi]. Terminates when
/// the simplex diameter falls below param_tol (converged) or after max_iter
/// reflections (converged = false, best vertex still returned).
SimplexResult nelder_mead_max(
    const std::function<double(const std::array<double, 2>&)>& f,
    std::array<double, 2> start, std::array<double, 2> step,
    std::array<double, 2> lo, std::array<double, 2> hi, double param_tol,
    int max_iter);

}  // namespace gkp
