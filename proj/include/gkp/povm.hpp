#pragma once

#include <variant>

#include "gkp/breeding_exact.hpp"
#include "gkp/density_kernel.hpp"

namespace gkp {

/// Which breeding engine feeds the finite-resolution window.
struct ApproxSource {
  int n;
};
struct ExactSource {
  int kappa;
  HPReal r;
};
using PovmSource = std::variant<ApproxSource, ExactSource>;

struct FiniteResState {
  DensityKernel kernel;
  HPReal probability;  // window integral of the homodyne density
};

/// Conditional mixed state of a finite-resolution momentum homodyne
/// post-selected on p_tilde with half-width epsilon: a rank-`nodes` mixture
/// over Gauss-Legendre nodes of the window, node weights proportional to
/// (quadrature weight x homodyne density). The window probability estimate is
/// re-derived at doubled node count and must agree to rel 1e-8.
FiniteResState finite_res_state(const PovmSource& source, const HPReal& p_tilde,
                                const HPReal& epsilon, unsigned nodes,
                                const PrecisionContext& ctx);

/// Integral of the conditional homodyne density over [p_tilde - eps, p_tilde + eps].
HPReal window_probability(int n, const HPReal& p_tilde, const HPReal& epsilon,
                          const PrecisionContext& ctx);
HPReal window_probability(const ApproxBreeder& breeder, const HPReal& p_tilde,
                          const HPReal& epsilon);

}  // namespace gkp
