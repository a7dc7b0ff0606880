#pragma once

#include "gkp/wave.hpp"

namespace gkp {

/// Input squeezing that puts the subtracted-state peaks on the breeding
/// lattice: r_opt(n) = asech(2 pi / n) / 2. Defined for n >= 7; below that the
/// peak spacing is unreachable.
HPReal r_opt(int n, const PrecisionContext& ctx);

/// Input squeezing maximizing the n-photon heralding probability:
/// r_max(n) = acosh(1 + 2n) / 2.
HPReal r_max(int n, const PrecisionContext& ctx);

/// Inline corrective squeezing pairing with r_max:
/// r_c(n) = -ln(2 pi (1+2n)/n) / 2, negative for all n >= 1.
HPReal r_crit(int n, const PrecisionContext& ctx);

/// xi_dB = (20 / ln 10) xi and its inverse.
HPReal xi_to_db(const HPReal& xi);
HPReal xi_from_db(const HPReal& db);

/// Photon-subtracted squeezed-vacuum wave at optimal squeezing:
/// psi(q) = Gamma(1/2+n)^(-1/2) (n/2pi)^((2n+1)/4) (-q)^n e^(-(n/4pi) q^2).
/// Normalized with certificate; n >= 7 (tied to the r_opt lattice condition).
CombWave gps_wave(int n, const PrecisionContext& ctx);

/// Heralding probability of the n-photon subtraction at r_max input
/// squeezing: 2^(-n) n^n (1+2n)^(-1/2-n) Gamma(1+2n) / (n!)^2.
HPReal p_gps(int n, const PrecisionContext& ctx);

/// Smallest tooth count m such that widening the comb to m+1 teeth moves the
/// squared norm by less than rel 1e-10.
int gkp_tooth_count(const HPReal& xi, const PrecisionContext& ctx);

/// Finite-squeezed logical-zero grid state on the 2 sqrt(pi) lattice:
/// psi(q) propto sum_t e^(-2 pi t^2 e^(-2 xi)) e^(-(q - 2t sqrt(pi))^2 e^(2 xi)/2),
/// t = -m..m, normalized with certificate. xi >= 0.
CombWave gkp_wave(const HPReal& xi, int m, const PrecisionContext& ctx);
CombWave gkp_wave(const HPReal& xi, const PrecisionContext& ctx);  // adaptive m

/// Squeezed coherent-state superposition S(r)[D(alpha) + (-1)^kappa D(-alpha)]|0>:
/// two Gaussians at +-alpha e^r with rate e^(-2r), relative sign (-1)^kappa.
/// kappa is reduced mod 2; odd kappa with alpha = 0 is the zero vector.
CombWave scss_wave(int kappa, const HPReal& alpha, const HPReal& r,
                   const PrecisionContext& ctx);

}  // namespace gkp
