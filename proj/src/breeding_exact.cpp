#include "gkp/breeding_exact.hpp"

namespace gkp {

namespace {

int parity(int kappa) { return ((kappa % 2) + 2) % 2; }

void require_positive_r(const HPReal& r, const char* what) {
  if (r.sign() <= 0) throw DomainError(std::string(what) + ": r must be > 0");
}

// cos(2 sqrt(pi) p + kappa pi)
HPReal phase_cos(int kappa, const HPReal& p, const PrecisionContext& ctx) {
  HPReal c = cos(ctx.real(2L) * ctx.sqrt_pi() * p.at_precision(ctx.bits()));
  return parity(kappa) == 0 ? c : -c;
}

}  // namespace

HPReal exact_g(int kappa, const HPReal& r, const HPReal& p,
               const PrecisionContext& ctx) {
  require_positive_r(r, "exact_g");
  HPReal rr = r.at_precision(ctx.bits());
  HPReal E = exp(ctx.real(2L) * rr);          // e^{2r}
  HPReal epi = exp(E * ctx.pi());             // e^{e^{2r} pi}
  HPReal e3 = epi * epi * epi;
  HPReal e4 = e3 * epi;
  HPReal e5 = e4 * epi;
  HPReal c1 = phase_cos(kappa, p, ctx);
  HPReal c2 = cos(ctx.real(4L) * ctx.sqrt_pi() * p.at_precision(ctx.bits()));
  HPReal num = ctx.one() / e5 + e3 * (ctx.real(5L) + ctx.real(2L) * c2) +
               ctx.real(4L) * (ctx.one() + e4) * c1;
  HPReal den = ctx.one() + e5 * (ctx.real(2L) + c2) + ctx.real(4L) * e3 * c1;
  return num / den;
}

HPReal exact_homodyne_density(int kappa, const HPReal& r, const HPReal& p,
                              const PrecisionContext& ctx) {
  require_positive_r(r, "exact_homodyne_density");
  HPReal rr = r.at_precision(ctx.bits());
  HPReal pp = p.at_precision(ctx.bits());
  HPReal E = exp(ctx.real(2L) * rr);
  HPReal epi = exp(E * ctx.pi());
  HPReal e2 = epi * epi;
  HPReal e3 = e2 * epi;
  HPReal e4 = e3 * epi;
  HPReal cx = cos(ctx.real(2L) * ctx.sqrt_pi() * pp);
  HPReal c1 = parity(kappa) == 0 ? cx : -cx;
  HPReal envelope = exp(-exp(-ctx.real(2L) * rr) * pp * pp);
  HPReal bracket = ctx.one() + e4 * (ctx.real(2L) * cx * cx + ctx.one()) +
                   ctx.real(4L) * e3 * c1;
  HPReal sign = ctx.real(parity(kappa) == 0 ? 1L : -1L);
  HPReal norm = ctx.real(2L) * exp(rr) * ctx.sqrt_pi() * (sign + e2) * (sign + e2);
  return envelope * bracket / norm;
}

ExactBreedOutcome exact_breed_wave(int kappa, const HPReal& r, const HPReal& p,
                                   const PrecisionContext& ctx) {
  require_positive_r(r, "exact_breed_wave");
  HPReal rr = r.at_precision(ctx.bits());
  HPReal pp = p.at_precision(ctx.bits());
  HPReal E = exp(ctx.real(2L) * rr);
  HPReal shift = ctx.real(2L) * ctx.sqrt_pi();
  HPReal w = ctx.real(2L) * phase_cos(kappa, pp, ctx);
  std::vector<GaussPolyWave> comps;
  comps.emplace_back(std::vector<WaveTerm>{{HPComplex(ctx.one()), 0}}, E,
                     -shift, ctx.zero());
  comps.emplace_back(std::vector<WaveTerm>{{HPComplex(w), 0}}, E, ctx.zero(),
                     ctx.zero());
  comps.emplace_back(std::vector<WaveTerm>{{HPComplex(ctx.one()), 0}}, E,
                     shift, ctx.zero());
  CombWave raw{std::move(comps)};
  if (raw.norm2() < HPReal::of(1e-60, 64))
    throw DegenerateOutcomeError(
        "exact_breed_wave: outcome cancels the comb entirely");
  CombWave wave = raw.normalized();
  HPReal g = exact_g(kappa, rr, pp, ctx);
  bool neg = g.sign() < 0;
  return {parity(kappa),
          rr,
          pp,
          std::move(wave),
          exact_homodyne_density(kappa, rr, pp, ctx),
          g,
          neg ? ctx.pi() : ctx.zero(),
          neg ? ctx.sqrt_pi() / ctx.real(2L) : ctx.zero()};
}

CombWave exact_ideal_wave(const HPReal& r, const PrecisionContext& ctx) {
  require_positive_r(r, "exact_ideal_wave");
  HPReal rr = r.at_precision(ctx.bits());
  HPReal E = exp(ctx.real(2L) * rr);
  HPReal epi = exp(-E * ctx.pi());           // e^{-e^{2r} pi}
  HPReal e4 = epi * epi * epi * epi;
  HPReal shift = ctx.real(2L) * ctx.sqrt_pi();
  HPReal quarter_pi = pow(ctx.pi(), HPReal::of(0.25, ctx.bits()));
  HPReal norm = quarter_pi * sqrt(ctx.real(2L) * exp(-rr) *
                                  (ctx.real(3L) + e4 + ctx.real(4L) * epi));
  HPComplex side(ctx.one() / norm);
  HPComplex mid(ctx.real(2L) / norm);
  std::vector<GaussPolyWave> comps;
  comps.emplace_back(std::vector<WaveTerm>{{side, 0}}, E, -shift, ctx.zero());
  comps.emplace_back(std::vector<WaveTerm>{{mid, 0}}, E, ctx.zero(), ctx.zero());
  comps.emplace_back(std::vector<WaveTerm>{{side, 0}}, E, shift, ctx.zero());
  return CombWave{std::move(comps)};
}

CombWave exact_displaced_wave(int kappa, const HPReal& r, const HPReal& p,
                              const HPReal& beta, const PrecisionContext& ctx) {
  return exact_breed_wave(kappa, r, p, ctx)
      .wave.phase_multiplied(beta.at_precision(ctx.bits()));
}

HPReal exact_peak_outcome(int kappa, long l, const PrecisionContext& ctx) {
  if (parity(kappa) == 0) return ctx.real(l) * ctx.sqrt_pi();
  return ctx.real(2L * l + 1) * ctx.sqrt_pi() / ctx.real(2L);
}

HPReal approx_vs_exact_fidelity(int n, const HPReal& p,
                                const PrecisionContext& ctx) {
  ApproxBreeder breeder(n, ctx);
  DisplacementDecision dd = breeder.corrective_delta(p);
  CombWave approx = breeder.displaced_wave(p, dd.delta);
  HPReal r = r_opt(n, ctx);
  ExactBreedOutcome ex = exact_breed_wave(n, r, p, ctx);
  CombWave exact = ex.wave.phase_multiplied(ex.delta_tilde);
  return fidelity_pure(exact, approx);
}

KLResult kl_divergence_vs_exact(int n, const std::vector<HPReal>& grid,
                                const PrecisionContext& ctx) {
  ApproxBreeder breeder(n, ctx);
  HPReal r = r_opt(n, ctx);
  DensityFn P = [&](const HPReal& p) { return breeder.density(p); };
  DensityFn Q = [&](const HPReal& p) {
    return exact_homodyne_density(n, r, p, ctx);
  };
  return kl_divergence(P, Q, grid);
}

}  // namespace gkp
