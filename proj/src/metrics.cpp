#include "gkp/metrics.hpp"

#include <string>

namespace gkp {

void require_normalized(const CombWave& w, const char* what) {
  if (w.empty()) throw ContractError(std::string(what) + ": empty wave");
  HPReal n2 = w.norm_certificate() ? *w.norm_certificate() : w.norm2();
  if (!rel_close(n2, HPReal::of(1L, n2.precision()), 1e-8))
    throw ContractError(std::string(what) + ": input not normalized");
}

HPReal fidelity_pure(const CombWave& x, const CombWave& y) {
  require_normalized(x, "fidelity_pure");
  require_normalized(y, "fidelity_pure");
  return overlap(x, y).norm2();
}

HPReal fidelity_pure_mixed(const CombWave& psi, const DensityKernel& rho) {
  require_normalized(psi, "fidelity_pure_mixed");
  HPReal tr = rho.trace();
  if (!rel_close(tr, HPReal::of(1L, tr.precision()), 1e-8))
    throw ContractError("fidelity_pure_mixed: kernel trace deviates from 1");
  HPReal f = HPReal::of(0L, psi.precision());
  for (const auto& t : rho.terms()) f += t.weight * overlap(psi, t.wave).norm2();
  return f;
}

DampResult damping_map(const CombWave& psi, const HPReal& r_d) {
  if (r_d.sign() < 0) throw DomainError("damping_map: r_d must be >= 0");
  require_normalized(psi, "damping_map");
  mpfr_prec_t prec = psi.precision();
  HPReal rd = r_d.at_precision(prec);
  HPReal lambda = HPReal::of(1L, prec) - tanh(rd);
  CombWave image = psi.gaussian_weighted(lambda).scaled(HPComplex(sqrt(sech(rd))));
  HPReal p_damp = image.norm2();
  return {image.normalized(), p_damp};
}

GKNoErrorResult gk_no_error(const CombWave& psi, const PrecisionContext& ctx) {
  require_normalized(psi, "gk_no_error");
  HPReal sp = ctx.sqrt_pi();
  HPReal step = ctx.real(2L) * sp;       // position lattice period
  HPReal vhalf = sp / ctx.real(6L);      // correctable |v| <= sqrt(pi)/6
  const HPReal& uhalf = vhalf;           // correctable |u| <= sqrt(pi)/6

  // Closed-form v integral per lattice-offset pair m = s - s':
  // int_{|v|<=V} e^{-i 2 sqrt(pi) m v} dv = sin(2 sqrt(pi) m V)/(sqrt(pi) m).
  // For the full cell (V = sqrt(pi)/2) every m != 0 term vanishes exactly.
  const long kMaxShells = 64;
  std::vector<HPReal> Ival;  // value-window integrals, index |m|
  Ival.push_back(ctx.real(2L) * vhalf);
  for (long m = 1; m <= 2 * kMaxShells; ++m)
    Ival.push_back(sin(ctx.pi() * ctx.real(m) / ctx.real(3L)) /
                   (sp * ctx.real(m)));

  // psi at every relevant lattice translate of u; shells grow until both
  // edge amplitudes fall below 1e-15 of the accumulated RMS.
  auto lattice_values = [&](const HPReal& u) {
    std::vector<HPComplex> vals;  // s = -S..S
    long S = 4;
    for (long s = -S; s <= S; ++s) vals.push_back(psi.eval(u + step * ctx.real(s)));
    HPReal floor_sq = HPReal::of(1e-30, 64);
    for (;;) {
      HPReal total = ctx.zero();
      for (const auto& v : vals) total += v.norm2();
      HPReal edge = max(vals.front().norm2(), vals.back().norm2());
      if (!total.is_zero() && edge < floor_sq * total) break;
      if (S >= kMaxShells)
        throw ConvergenceError("gk_no_error: lattice tail did not decay",
                               total.to_double());
      ++S;
      vals.insert(vals.begin(), psi.eval(u - step * ctx.real(S)));
      vals.push_back(psi.eval(u + step * ctx.real(S)));
    }
    return vals;
  };

  RealFn mass_integrand = [&](const HPReal& u) {
    auto vals = lattice_values(u);
    HPReal acc = ctx.zero();
    for (const auto& v : vals) acc += v.norm2();
    return acc;
  };
  RealFn value_integrand = [&](const HPReal& u) {
    auto vals = lattice_values(u);
    HPReal acc = ctx.zero();
    for (size_t i = 0; i < vals.size(); ++i) acc += vals[i].norm2() * Ival[0];
    for (size_t i = 0; i < vals.size(); ++i)
      for (size_t j = i + 1; j < vals.size(); ++j) {
        HPComplex cross = vals[j] * vals[i].conj();
        acc += ctx.real(2L) * cross.re * Ival[j - i];
      }
    return acc / sp;  // normalization c^2 = 1/sqrt(pi)
  };

  QuadResult mass = gl_integrate(mass_integrand, -sp, sp, 1e-9, ctx);
  if (!rel_close(mass.value, ctx.one(), 1e-6))
    throw ConventionError(
        "gk_no_error: full-cell mass deviates from 1 (lattice/normalization "
        "convention broken): " +
        mass.value.str());
  QuadResult val = gl_integrate(value_integrand, -uhalf, uhalf, 1e-9, ctx);
  return {val.value, mass.value, mass.evaluations + val.evaluations};
}

KLResult kl_divergence(const DensityFn& P, const DensityFn& Q,
                       const std::vector<HPReal>& grid) {
  if (grid.size() < 2) throw DomainError("kl_divergence: grid too small");
  mpfr_prec_t prec = grid[0].precision();
  HPReal floor = HPReal::of(1e-30, prec);
  bool clamped = false;
  auto integrand = [&](const HPReal& x) {
    HPReal pv = P(x);
    if (pv <= floor) return HPReal::of(0L, prec);
    HPReal qv = Q(x);
    if (qv <= floor) {
      clamped = true;
      qv = floor;
    }
    return pv * log(pv / qv);
  };
  HPReal acc = HPReal::of(0L, prec);
  HPReal prev = integrand(grid[0]);
  HPReal half = HPReal::of(0.5, prec);
  for (size_t i = 1; i < grid.size(); ++i) {
    HPReal cur = integrand(grid[i]);
    acc += half * (grid[i] - grid[i - 1]) * (prev + cur);
    prev = cur;
  }
  return {acc, clamped};
}

std::vector<HPReal> uniform_grid(const HPReal& lo, const HPReal& hi,
                                 size_t count) {
  if (count < 2) throw DomainError("uniform_grid: need at least 2 points");
  std::vector<HPReal> g;
  g.reserve(count);
  HPReal span = hi - lo;
  HPReal denom = HPReal::of(static_cast<long>(count) - 1, lo.precision());
  for (size_t i = 0; i < count; ++i)
    g.push_back(lo + span * HPReal::of(static_cast<long>(i), lo.precision()) /
                         denom);
  return g;
}

}  // namespace gkp
