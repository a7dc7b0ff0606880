#pragma once

#include <vector>

#include "gkp/hp.hpp"

namespace gkp {

/// Gamma function for x > 0.
HPReal gamma_fn(const HPReal& x);

/// Exact binomial coefficient C(n, k), rounded to `prec` bits.
HPReal binomial(unsigned n, unsigned k, mpfr_prec_t prec);

/// Exact n!, rounded to `prec` bits.
HPReal factorial(unsigned n, mpfr_prec_t prec);

/// Gamma(m + 1/2) for m = 0..mmax, built by the half-integer recurrence.
std::vector<HPReal> gamma_half_table(unsigned mmax, mpfr_prec_t prec);

/// Series coefficient f_l^k(gamma) = (-1/gamma^2)^(k-l) C(2k,2l)
/// (2/gamma)^(l+1/2) Gamma(l+1/2). Zero when C(2k,2l) vanishes (k < l <= 2k).
HPReal f_coeff(unsigned k, unsigned l, const HPReal& gamma);

/// Theta_k(y, gamma) = integral of x^(2k) exp(-gamma x^2/2) exp(i x y) over R,
/// evaluated by its closed form e^(-y^2/(2 gamma)) sum_l f_l^k(gamma) y^(2(k-l)).
HPReal theta(unsigned k, const HPReal& y, const HPReal& gamma);

/// Precomputed f_l^k(gamma) rows for k = 0..kmax, for repeated Theta
/// evaluations at a fixed gamma.
class ThetaTable {
 public:
  ThetaTable(unsigned kmax, const HPReal& gamma);

  unsigned kmax() const { return static_cast<unsigned>(f_.size()) - 1; }
  const HPReal& gamma() const { return gamma_; }
  const HPReal& coeff(unsigned k, unsigned l) const { return f_[k][l]; }

  HPReal eval(unsigned k, const HPReal& y) const;
  /// Theta_k(y) for every k = 0..kmax, sharing the power table of y.
  std::vector<HPReal> eval_all(const HPReal& y) const;

 private:
  HPReal gamma_;
  std::vector<std::vector<HPReal>> f_;  // f_[k][l], 0 <= l <= k
};

/// gauss_moment(j, a, b) = integral of x^j exp(-a x^2/2) exp(i b x) over R.
/// Real for even j, purely imaginary for odd j (real a, b).
HPComplex gauss_moment(unsigned j, const HPReal& a, const HPReal& b);

/// gauss_moment(j, a, b) for all j = 0..jmax with shared moment recurrences.
std::vector<HPComplex> gauss_moment_table(unsigned jmax, const HPReal& a,
                                          const HPReal& b);

/// b = 0 fast path: integral of x^j exp(-a x^2/2); odd entries are zero.
std::vector<HPReal> gauss_moment_table_real(unsigned jmax, const HPReal& a);

}  // namespace gkp
