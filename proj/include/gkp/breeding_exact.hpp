#pragma once

#include "gkp/breeding_approx.hpp"
#include "gkp/metrics.hpp"

namespace gkp {

/// Exact SCSS-breeding outcome at measurement value p: a three-peak comb with
/// centers {-2 sqrt(pi), 0, +2 sqrt(pi)} whose center weight is
/// 2 cos(2 sqrt(pi) p + kappa pi).
struct ExactBreedOutcome {
  int kappa;          // parity, reduced mod 2
  HPReal r;
  HPReal p;
  CombWave wave;      // normalized (Gram-matrix normalization)
  HPReal density;     // closed-form homodyne density
  HPReal g_tilde;     // displacement witness
  HPReal theta;       // mean-phase branch, 0 or pi
  HPReal delta_tilde; // corrective displacement, 0 or sqrt(pi)/2
};

ExactBreedOutcome exact_breed_wave(int kappa, const HPReal& r, const HPReal& p,
                                   const PrecisionContext& ctx);

/// Closed-form homodyne density of exact breeding; integrates to 1 over p.
HPReal exact_homodyne_density(int kappa, const HPReal& r, const HPReal& p,
                              const PrecisionContext& ctx);

/// Displacement witness; sign picks delta_tilde like the approximate g.
HPReal exact_g(int kappa, const HPReal& r, const HPReal& p,
               const PrecisionContext& ctx);

/// Ideal output heralded at the peak outcomes, with its explicit closed-form
/// normalization constant (unit norm is asserted by tests, not re-imposed).
CombWave exact_ideal_wave(const HPReal& r, const PrecisionContext& ctx);

/// e^{-i beta q} times the exact outcome wave.
CombWave exact_displaced_wave(int kappa, const HPReal& r, const HPReal& p,
                              const HPReal& beta, const PrecisionContext& ctx);

/// Heralding outcomes: l sqrt(pi) for even parity, (2l+1) sqrt(pi)/2 for odd.
HPReal exact_peak_outcome(int kappa, long l, const PrecisionContext& ctx);

/// |<exact corrected | approx corrected>|^2 at outcome p, with each state's
/// own corrective displacement applied; exact side uses parity n and the
/// peak-spacing-matched squeezing r_opt(n).
HPReal approx_vs_exact_fidelity(int n, const HPReal& p,
                                const PrecisionContext& ctx);

/// D_KL(approx homodyne density || exact density at r_opt(n)) on the grid.
KLResult kl_divergence_vs_exact(int n, const std::vector<HPReal>& grid,
                                const PrecisionContext& ctx);

}  // namespace gkp
