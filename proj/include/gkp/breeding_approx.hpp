#pragma once

#include <memory>

#include "gkp/states.hpp"

namespace gkp {

/// Conditional breeding output for measurement outcome p.
struct BreedOutcome {
  int n;
  HPReal p;
  CombWave wave;    // normalized position wave, certificate set
  HPReal norm_N;    // positive root of the Gram sum N^2
  HPReal density;   // homodyne density P^Hom_n(p)
};

/// Feed-forward displacement choice for outcome p: mean phase theta is 0 when
/// the displacement witness g is >= 0 (delta = 0) and pi otherwise
/// (delta = sqrt(pi)/2). g = 0 ties break to delta = 0.
struct DisplacementDecision {
  HPReal g_value;
  HPReal theta;
  HPReal delta;
};

/// Breeds two n-photon subtracted states on a balanced beam splitter with a
/// momentum homodyne on the second mode. Tables that depend only on n (theta
/// coefficient rows, lattice Theta values, the hoisted displacement-witness
/// kernel) are built once at two precisions: results are produced at the
/// working mantissa and re-derived at twice the mantissa, and the pair must
/// agree to rel 1e-10 (cancellation guard on all alternating sums).
class ApproxBreeder {
 public:
  ApproxBreeder(int n, PrecisionContext ctx);
  ~ApproxBreeder();
  ApproxBreeder(ApproxBreeder&&) noexcept;
  ApproxBreeder& operator=(ApproxBreeder&&) noexcept;

  int n() const;
  const PrecisionContext& context() const;

  /// Output wave, Gram norm and homodyne density at outcome p.
  BreedOutcome breed(const HPReal& p) const;

  /// P^Hom_n(p) alone (no wave assembly).
  HPReal density(const HPReal& p) const;

  /// Momentum-side wave of the output (Fourier transform, closed form).
  CombWave momentum_wave(const HPReal& p) const;

  /// Displacement witness g_n(p) (real; its sign is the mean-phase branch).
  HPReal g(const HPReal& p) const;

  DisplacementDecision corrective_delta(const HPReal& p) const;

  /// Output displaced in momentum by beta, via the resummed coefficient route;
  /// identical to e^(-i beta q) breed(p).wave up to rounding.
  CombWave displaced_wave(const HPReal& p, const HPReal& beta) const;

  /// arg <phi_delta| D(2 sqrt(pi) shift) |phi_delta> after the corrective
  /// displacement chosen for p; near zero by construction. Vanishing overlap
  /// magnitude (< 1e-30) leaves the phase undefined.
  HPReal mean_phase_after_correction(const HPReal& p) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

BreedOutcome breed_wave(int n, const HPReal& p, const PrecisionContext& ctx);
HPReal homodyne_density(int n, const HPReal& p, const PrecisionContext& ctx);
CombWave momentum_wave(int n, const HPReal& p, const PrecisionContext& ctx);
HPReal g_fn(int n, const HPReal& p, const PrecisionContext& ctx);
DisplacementDecision corrective_delta(int n, const HPReal& p,
                                      const PrecisionContext& ctx);
CombWave displaced_wave(int n, const HPReal& p, const HPReal& beta,
                        const PrecisionContext& ctx);
HPReal mean_phase_after_correction(int n, const HPReal& p,
                                   const PrecisionContext& ctx);

}  // namespace gkp
