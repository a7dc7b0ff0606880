#include "gkp/numerics.hpp"

#include <gmp.h>

namespace gkp {

HPReal gamma_fn(const HPReal& x) {
  if (x.sign() <= 0) throw DomainError("gamma_fn: argument must be positive");
  HPReal r(x.precision());
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  if (mpfr_inf_p(r.raw())) throw CancellationError("gamma_fn: overflow");
  return r;
}

HPReal binomial(unsigned n, unsigned k, mpfr_prec_t prec) {
  if (k > n) return HPReal::of(0L, prec);
  mpz_t z;
  mpz_init(z);
  mpz_bin_uiui(z, n, k);
  HPReal r(prec);
  mpfr_set_z(r.raw(), z, MPFR_RNDN);
  mpz_clear(z);
  return r;
}

HPReal factorial(unsigned n, mpfr_prec_t prec) {
  mpz_t z;
  mpz_init(z);
  mpz_fac_ui(z, n);
  HPReal r(prec);
  mpfr_set_z(r.raw(), z, MPFR_RNDN);
  mpz_clear(z);
  return r;
}

std::vector<HPReal> gamma_half_table(unsigned mmax, mpfr_prec_t prec) {
  std::vector<HPReal> g;
  g.reserve(mmax + 1);
  HPReal pi(prec);
  mpfr_const_pi(pi.raw(), MPFR_RNDN);
  g.push_back(sqrt(pi));  // Gamma(1/2)
  HPReal half = HPReal::of(0.5, prec);
  for (unsigned m = 1; m <= mmax; ++m)
    g.push_back((HPReal::of(static_cast<long>(m), prec) - half) * g[m - 1]);
  return g;
}

HPReal f_coeff(unsigned k, unsigned l, const HPReal& gamma) {
  if (gamma.sign() <= 0) throw DomainError("f_coeff: gamma must be positive");
  if (l > k) throw DomainError("f_coeff: l exceeds the y^2 degree k");
  mpfr_prec_t prec = gamma.precision();
  HPReal two = HPReal::of(2L, prec);
  HPReal half = HPReal::of(0.5, prec);
  HPReal r = binomial(2 * k, 2 * l, prec) * pow(two / gamma, static_cast<long>(l)) *
             sqrt(two / gamma) *
             gamma_fn(HPReal::of(static_cast<long>(l), prec) + half) /
             pow(gamma, 2L * static_cast<long>(k - l));
  if ((k - l) % 2 == 1) r = -r;
  return r;
}

ThetaTable::ThetaTable(unsigned kmax, const HPReal& gamma) : gamma_(gamma) {
  if (gamma.sign() <= 0) throw DomainError("ThetaTable: gamma must be positive");
  mpfr_prec_t prec = gamma.precision();
  HPReal two = HPReal::of(2L, prec);
  HPReal inv_g2 = HPReal::of(1L, prec) / (gamma * gamma);
  HPReal two_over_g = two / gamma;
  auto ghalf = gamma_half_table(kmax, prec);
  // running powers keep construction at O(kmax^2) multiplies
  std::vector<HPReal> pow_tg;  // (2/gamma)^l
  pow_tg.push_back(HPReal::of(1L, prec));
  for (unsigned l = 1; l <= kmax; ++l) pow_tg.push_back(pow_tg[l - 1] * two_over_g);
  HPReal sqrt_tg = sqrt(two_over_g);
  f_.resize(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) {
    f_[k].reserve(k + 1);
    for (unsigned l = 0; l <= k; ++l) {
      HPReal c = binomial(2 * k, 2 * l, prec) * pow_tg[l] * sqrt_tg * ghalf[l];
      HPReal decay = pow(inv_g2, static_cast<long>(k - l));
      if ((k - l) % 2 == 1) decay = -decay;
      f_[k].push_back(c * decay);
    }
  }
}

HPReal ThetaTable::eval(unsigned k, const HPReal& y) const {
  if (k > kmax()) throw DomainError("ThetaTable::eval: k exceeds table");
  mpfr_prec_t prec = std::max(gamma_.precision(), y.precision());
  HPReal y2 = y * y;
  HPReal sum = HPReal::of(0L, prec);
  HPReal ypow = HPReal::of(1L, prec);  // y^(2(k-l)) built from l = k down
  for (unsigned d = 0; d <= k; ++d) {  // d = k - l
    sum += f_[k][k - d] * ypow;
    ypow *= y2;
  }
  return sum * exp(-y2 / (HPReal::of(2L, prec) * gamma_));
}

std::vector<HPReal> ThetaTable::eval_all(const HPReal& y) const {
  unsigned km = kmax();
  mpfr_prec_t prec = std::max(gamma_.precision(), y.precision());
  HPReal y2 = y * y;
  std::vector<HPReal> y2pow;  // y^(2m)
  y2pow.push_back(HPReal::of(1L, prec));
  for (unsigned m = 1; m <= km; ++m) y2pow.push_back(y2pow[m - 1] * y2);
  HPReal envelope = exp(-y2 / (HPReal::of(2L, prec) * gamma_));
  std::vector<HPReal> out;
  out.reserve(km + 1);
  for (unsigned k = 0; k <= km; ++k) {
    HPReal sum = HPReal::of(0L, prec);
    for (unsigned l = 0; l <= k; ++l) sum += f_[k][l] * y2pow[k - l];
    out.push_back(sum * envelope);
  }
  return out;
}

HPReal theta(unsigned k, const HPReal& y, const HPReal& gamma) {
  if (gamma.sign() <= 0) throw DomainError("theta: gamma must be positive");
  mpfr_prec_t prec = std::max(y.precision(), gamma.precision());
  HPReal y2 = y * y;
  HPReal sum = HPReal::of(0L, prec);
  for (unsigned l = 0; l <= k; ++l)
    sum += f_coeff(k, l, gamma.at_precision(prec)) * pow(y2, static_cast<long>(k - l));
  return sum * exp(-y2 / (HPReal::of(2L, prec) * gamma));
}

std::vector<HPReal> gauss_moment_table_real(unsigned jmax, const HPReal& a) {
  if (a.sign() <= 0) throw DomainError("gauss_moment: rate must be positive");
  mpfr_prec_t prec = a.precision();
  HPReal two_pi(prec);
  mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
  two_pi = two_pi * HPReal::of(2L, prec);
  std::vector<HPReal> m(jmax + 1, HPReal::of(0L, prec));
  m[0] = sqrt(two_pi / a);
  // M_{j+2} = (j+1)/a * M_j; odd moments vanish
  for (unsigned j = 2; j <= jmax; j += 2)
    m[j] = HPReal::of(static_cast<long>(j - 1), prec) / a * m[j - 2];
  return m;
}

std::vector<HPComplex> gauss_moment_table(unsigned jmax, const HPReal& a,
                                          const HPReal& b) {
  if (a.sign() <= 0) throw DomainError("gauss_moment: rate must be positive");
  mpfr_prec_t prec = std::max(a.precision(), b.precision());
  HPReal a_p = a.at_precision(prec);
  auto mom = gauss_moment_table_real(jmax, a_p);
  HPReal envelope = exp(-(b * b) / (HPReal::of(2L, prec) * a_p));
  if (b.is_zero()) {
    std::vector<HPComplex> out;
    out.reserve(jmax + 1);
    for (unsigned j = 0; j <= jmax; ++j)
      out.emplace_back(mom[j] * envelope, HPReal::of(0L, prec));
    return out;
  }
  // contour shift x -> x + i b/a: sum_m C(j,m) (i b/a)^(j-m) M_m(a)
  HPReal r = b / a_p;  // (i b/a)^t = i^t r^t
  std::vector<HPReal> rpow;
  rpow.push_back(HPReal::of(1L, prec));
  for (unsigned t = 1; t <= jmax; ++t) rpow.push_back(rpow[t - 1] * r);
  std::vector<HPComplex> out;
  out.reserve(jmax + 1);
  for (unsigned j = 0; j <= jmax; ++j) {
    HPReal re = HPReal::of(0L, prec), im = HPReal::of(0L, prec);
    for (unsigned m = 0; m <= j; m += 2) {  // odd M_m vanish
      unsigned t = j - m;                   // power of i
      HPReal term = binomial(j, m, prec) * rpow[t] * mom[m];
      switch (t % 4) {
        case 0: re += term; break;
        case 1: im += term; break;
        case 2: re -= term; break;
        default: im -= term; break;
      }
    }
    out.emplace_back(re * envelope, im * envelope);
  }
  return out;
}

HPComplex gauss_moment(unsigned j, const HPReal& a, const HPReal& b) {
  return gauss_moment_table(j, a, b)[j];
}

}  // namespace gkp
