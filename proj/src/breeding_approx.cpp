#include "gkp/breeding_approx.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace gkp {

namespace {

// Per-n immutable tables at one precision. f_l^k rows double as both the
// Theta coefficient rows and the Fourier resummation coefficients.
struct Tables {
  PrecisionContext ctx;
  int n;
  HPReal rate;        // n / 2pi: Gaussian rate of the position wave
  HPReal inv_rate;    // 2pi / n: rate of the momentum wave
  HPReal two_pi;
  HPReal lattice;     // 2 sqrt(pi)
  ThetaTable theta_p;    // gamma = n/2pi; rows are f_j^k(n/2pi)
  ThetaTable theta_dn;   // rows f_m^s(2pi/n) for the displaced resummation
  std::vector<HPReal> theta_lat;    // Theta_K(2 sqrt(pi), 4pi/n), K = 0..2n
  std::vector<HPReal> binom;        // C(n, k)
  std::vector<HPReal> norm_kernel;  // (2pi/n)^(m+1/2) Gamma(m+1/2), m = 0..2n
  std::vector<std::vector<HPReal>> T;  // hoisted witness kernel T[k][k']
  HPReal dens_pref;   // squared prefactor of P^Hom

  Tables(int n_, const PrecisionContext& c)
      : ctx(c),
        n(n_),
        rate(c.real(n_) / (c.real(2L) * c.pi())),
        inv_rate(c.real(2L) * c.pi() / c.real(n_)),
        two_pi(c.real(2L) * c.pi()),
        lattice(c.real(2L) * c.sqrt_pi()),
        theta_p(static_cast<unsigned>(n_), rate),
        theta_dn(static_cast<unsigned>(n_), inv_rate) {
    unsigned un = static_cast<unsigned>(n);
    ThetaTable lat_table(2 * un, c.real(2L) * inv_rate);  // gamma = 4pi/n
    theta_lat = lat_table.eval_all(lattice);
    binom.reserve(un + 1);
    for (unsigned k = 0; k <= un; ++k) binom.push_back(binomial(un, k, c.bits()));
    auto ghalf = gamma_half_table(2 * un, c.bits());
    norm_kernel.reserve(2 * un + 1);
    HPReal run = sqrt(inv_rate);
    for (unsigned m = 0; m <= 2 * un; ++m) {
      norm_kernel.push_back(run * ghalf[m]);
      run *= inv_rate;
    }
    // T[k][k'] = sum_{j,j'} f_j^(n-k) f_j'^(n-k') Theta_(2n-k-k'-j-j')(lattice),
    // with the j' sum hoisted per k'.
    std::vector<std::vector<HPReal>> V(un + 1);
    for (unsigned kp = 0; kp <= un; ++kp) {
      V[kp].reserve(2 * un + 1);
      for (unsigned M = 0; M <= 2 * un; ++M) {
        HPReal s = c.zero();
        unsigned jmax = std::min(un - kp, M);
        for (unsigned jp = 0; jp <= jmax; ++jp)
          s += theta_p.coeff(un - kp, jp) * theta_lat[M - jp];
        V[kp].push_back(s);
      }
    }
    T.assign(un + 1, {});
    for (unsigned k = 0; k <= un; ++k) {
      T[k].reserve(un + 1);
      for (unsigned kp = 0; kp <= un; ++kp) {
        HPReal s = c.zero();
        for (unsigned j = 0; j <= un - k; ++j)
          s += theta_p.coeff(un - k, j) * V[kp][2 * un - k - kp - j];
        T[k].push_back(s);
      }
    }
    HPReal pref = pow(rate / c.real(2L), static_cast<long>(n)) *
                  sqrt(c.real(n_)) /
                  (two_pi * gamma_fn(c.real(0.5) + c.real(n_)));
    dens_pref = pref * pref;
  }

  // a_k = (-1)^k C(n,k) Theta_k(p, n/2pi)
  std::vector<HPReal> signed_theta(const HPReal& p) const {
    auto th = theta_p.eval_all(p.at_precision(ctx.bits()));
    for (size_t k = 0; k < th.size(); ++k) {
      th[k] *= binom[k];
      if (k % 2 == 1) th[k] = -th[k];
    }
    return th;
  }

  HPReal gram(const std::vector<HPReal>& a) const {
    unsigned un = static_cast<unsigned>(n);
    HPReal s = ctx.zero();
    for (unsigned k = 0; k <= un; ++k)
      for (unsigned kp = 0; kp <= un; ++kp)
        s += a[k] * a[kp] * norm_kernel[2 * un - k - kp];
    return s;
  }

  HPReal witness_sum(const std::vector<HPReal>& a) const {
    unsigned un = static_cast<unsigned>(n);
    HPReal s = ctx.zero();
    for (unsigned k = 0; k <= un; ++k)
      for (unsigned kp = 0; kp <= un; ++kp) s += a[k] * a[kp] * T[k][kp];
    return s;
  }

  // Momentum-side coefficients of p1^(2 nu), unnormalized.
  std::vector<HPReal> momentum_coeffs(const std::vector<HPReal>& a) const {
    unsigned un = static_cast<unsigned>(n);
    std::vector<HPReal> c(un + 1, ctx.zero());
    for (unsigned k = 0; k <= un; ++k)
      for (unsigned nu = 0; nu <= un - k; ++nu)
        c[nu] += a[k] * theta_p.coeff(un - k, un - k - nu);
    return c;
  }

  // Displaced-route coefficients of q1^(2 nu), unnormalized.
  std::vector<HPReal> displaced_coeffs(const std::vector<HPReal>& a) const {
    unsigned un = static_cast<unsigned>(n);
    std::vector<HPReal> c(un + 1, ctx.zero());
    for (unsigned k = 0; k <= un; ++k)
      for (unsigned j = 0; j <= un - k; ++j) {
        HPReal af = a[k] * theta_p.coeff(un - k, j);
        unsigned s = un - k - j;
        for (unsigned m = 0; m <= s; ++m) c[s - m] += af * theta_dn.coeff(s, m);
      }
    return c;
  }
};

void require_vec_stable(const std::vector<HPReal>& w,
                        const std::vector<HPReal>& d, const char* what) {
  mpfr_prec_t prec = w.empty() ? 64 : w[0].precision();
  HPReal scale = HPReal::of(0L, prec);
  for (const auto& x : w) scale = max(scale, abs(x));
  if (scale.is_zero()) return;
  HPReal tol = HPReal::of(1e-10, 64) * scale;
  for (size_t i = 0; i < w.size(); ++i)
    if (abs(w[i] - d[i].at_precision(prec)) > tol)
      throw CancellationError(std::string(what) +
                              ": coefficient sum unstable under precision "
                              "doubling; increase mantissa_bits");
}

}  // namespace

struct ApproxBreeder::Impl {
  PrecisionContext ctx;
  Tables work;
  Tables dbl;
  Impl(int n, const PrecisionContext& c)
      : ctx(c), work(n, c), dbl(n, c.doubled()) {}
};

ApproxBreeder::ApproxBreeder(int n, PrecisionContext ctx) {
  if (n < 7)
    throw DomainError("ApproxBreeder: n must be >= 7 (r_opt lattice condition)");
  impl_ = std::make_unique<Impl>(n, ctx);
}

ApproxBreeder::~ApproxBreeder() = default;
ApproxBreeder::ApproxBreeder(ApproxBreeder&&) noexcept = default;
ApproxBreeder& ApproxBreeder::operator=(ApproxBreeder&&) noexcept = default;

int ApproxBreeder::n() const { return impl_->work.n; }
const PrecisionContext& ApproxBreeder::context() const { return impl_->ctx; }

BreedOutcome ApproxBreeder::breed(const HPReal& p) const {
  const Tables& w = impl_->work;
  auto aw = w.signed_theta(p);
  auto ad = impl_->dbl.signed_theta(p);
  require_vec_stable(aw, ad, "breed_wave");
  HPReal n2 = w.gram(aw);
  require_stable(n2, impl_->dbl.gram(ad), "breeding norm");
  if (n2.sign() <= 0)
    throw CancellationError("breed_wave: Gram sum non-positive");
  HPReal N = sqrt(n2);
  unsigned un = static_cast<unsigned>(w.n);
  std::vector<WaveTerm> terms;
  terms.reserve(un + 1);
  for (unsigned k = 0; k <= un; ++k)
    terms.push_back({HPComplex(aw[k] / N), 2 * (un - k)});
  CombWave wave =
      CombWave(GaussPolyWave(std::move(terms), w.rate, w.ctx.zero(),
                             w.ctx.zero()))
          .normalized();
  return {w.n, p.at_precision(w.ctx.bits()), std::move(wave), N,
          w.dens_pref * n2};
}

HPReal ApproxBreeder::density(const HPReal& p) const {
  const Tables& w = impl_->work;
  auto aw = w.signed_theta(p);
  HPReal n2 = w.gram(aw);
  require_stable(n2, impl_->dbl.gram(impl_->dbl.signed_theta(p)),
                 "homodyne density");
  if (n2.sign() <= 0)
    throw CancellationError("homodyne_density: Gram sum non-positive");
  return w.dens_pref * n2;
}

CombWave ApproxBreeder::momentum_wave(const HPReal& p) const {
  const Tables& w = impl_->work;
  auto aw = w.signed_theta(p);
  auto cw = w.momentum_coeffs(aw);
  require_vec_stable(cw, impl_->dbl.momentum_coeffs(impl_->dbl.signed_theta(p)),
                     "momentum_wave");
  HPReal n2 = w.gram(aw);
  if (n2.sign() <= 0)
    throw CancellationError("momentum_wave: Gram sum non-positive");
  HPReal scale = sqrt(w.two_pi) * sqrt(n2);
  std::vector<WaveTerm> terms;
  for (unsigned nu = 0; nu < cw.size(); ++nu)
    terms.push_back({HPComplex(cw[nu] / scale), 2 * nu});
  return CombWave(GaussPolyWave(std::move(terms), w.inv_rate, w.ctx.zero(),
                                w.ctx.zero()))
      .normalized();
}

HPReal ApproxBreeder::g(const HPReal& p) const {
  const Tables& w = impl_->work;
  auto aw = w.signed_theta(p);
  HPReal n2 = w.gram(aw);
  if (n2.sign() <= 0) throw CancellationError("g_fn: Gram sum non-positive");
  HPReal s = w.witness_sum(aw);
  require_stable(s, impl_->dbl.witness_sum(impl_->dbl.signed_theta(p)),
                 "displacement witness");
  return s / (w.two_pi * sqrt(n2));
}

DisplacementDecision ApproxBreeder::corrective_delta(const HPReal& p) const {
  const PrecisionContext& c = impl_->ctx;
  HPReal gv = g(p);
  if (gv.sign() >= 0) return {gv, c.zero(), c.zero()};
  return {gv, c.pi(), c.sqrt_pi() / c.real(2L)};
}

CombWave ApproxBreeder::displaced_wave(const HPReal& p,
                                       const HPReal& beta) const {
  const Tables& w = impl_->work;
  auto aw = w.signed_theta(p);
  auto cw = w.displaced_coeffs(aw);
  require_vec_stable(
      cw, impl_->dbl.displaced_coeffs(impl_->dbl.signed_theta(p)),
      "displaced_wave");
  HPReal n2 = w.gram(aw);
  if (n2.sign() <= 0)
    throw CancellationError("displaced_wave: Gram sum non-positive");
  HPReal scale = w.two_pi * sqrt(n2);
  std::vector<WaveTerm> terms;
  for (unsigned nu = 0; nu < cw.size(); ++nu)
    terms.push_back({HPComplex(cw[nu] / scale), 2 * nu});
  return CombWave(GaussPolyWave(std::move(terms), w.rate, w.ctx.zero(),
                                -beta.at_precision(w.ctx.bits())))
      .normalized();
}

HPReal ApproxBreeder::mean_phase_after_correction(const HPReal& p) const {
  const Tables& w = impl_->work;
  DisplacementDecision dd = corrective_delta(p);
  CombWave phi = displaced_wave(p, dd.delta);
  // <phi| D(2 sqrt(pi) position shift) |phi> = int phi*(q) phi(q + 2 sqrt(pi)) dq
  HPComplex ov = overlap(phi, phi.translated(-w.lattice));
  if (ov.abs() < HPReal::of(1e-30, 64))
    throw UndefinedPhaseError(
        "mean_phase_after_correction: displaced overlap vanishes");
  return ov.arg();
}

BreedOutcome breed_wave(int n, const HPReal& p, const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).breed(p);
}
HPReal homodyne_density(int n, const HPReal& p, const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).density(p);
}
CombWave momentum_wave(int n, const HPReal& p, const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).momentum_wave(p);
}
HPReal g_fn(int n, const HPReal& p, const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).g(p);
}
DisplacementDecision corrective_delta(int n, const HPReal& p,
                                      const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).corrective_delta(p);
}
CombWave displaced_wave(int n, const HPReal& p, const HPReal& beta,
                        const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).displaced_wave(p, beta);
}
HPReal mean_phase_after_correction(int n, const HPReal& p,
                                   const PrecisionContext& ctx) {
  return ApproxBreeder(n, ctx).mean_phase_after_correction(p);
}

}  // namespace gkp
