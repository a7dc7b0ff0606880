#pragma once

#include <functional>

#include "gkp/density_kernel.hpp"
#include "gkp/quadrature.hpp"

namespace gkp {

/// Throws ContractError unless the wave is normalized (certificate trusted
/// when present, otherwise the Gram norm is recomputed) within rel 1e-8.
void require_normalized(const CombWave& w, const char* what);

/// |<x|y>|^2 in closed form. Both inputs must be normalized.
HPReal fidelity_pure(const CombWave& x, const CombWave& y);

/// <psi| rho |psi> for a finite-rank kernel. psi normalized, rho trace 1.
HPReal fidelity_pure_mixed(const CombWave& psi, const DensityKernel& rho);

struct DampResult {
  CombWave wave;   // renormalized image
  HPReal p_damp;   // squared norm of the unnormalized image
};

/// Heralded damping psi -> psi * exp(-(1 - tanh r_d) q^2 / 4) sqrt(sech r_d).
DampResult damping_map(const CombWave& psi, const HPReal& r_d);

struct GKNoErrorResult {
  HPReal value;      // shift-error mass inside |u|,|v| <= sqrt(pi)/6
  HPReal cell_mass;  // full-cell completeness integral, must be 1 +- 1e-6
  long nodes_used;
};

/// No-error probability of one error-correction round: the squared
/// shifted-grid amplitude Z[psi](u, v) integrated over the correctable square,
/// with Z over the 2 sqrt(pi) position lattice. The v integral of each lattice
/// pair is closed-form (a sinc), so only the u axis is quadratured.
GKNoErrorResult gk_no_error(const CombWave& psi, const PrecisionContext& ctx);

using DensityFn = std::function<HPReal(const HPReal&)>;

struct KLResult {
  HPReal value;
  bool support_clamped;  // Q hit the support floor where P was alive
};

/// D_KL(P || Q) by trapezoid quadrature on the grid. Points with
/// P <= 1e-30 contribute zero; P alive with Q <= 1e-30 clamps Q to the floor
/// and records support_clamped.
KLResult kl_divergence(const DensityFn& P, const DensityFn& Q,
                       const std::vector<HPReal>& grid);

/// count evenly spaced points from lo to hi inclusive.
std::vector<HPReal> uniform_grid(const HPReal& lo, const HPReal& hi,
                                 size_t count);

}  // namespace gkp
