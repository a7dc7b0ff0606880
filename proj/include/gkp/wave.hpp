#pragma once

#include <optional>
#include <vector>

#include "gkp/numerics.hpp"

namespace gkp {

/// One polynomial term c * (q - center)^power of a GaussPolyWave.
struct WaveTerm {
  HPComplex coeff;
  unsigned power;
};

/// psi(q) = [sum_t c_t (q-mu)^t] * exp(-rate (q-mu)^2 / 2 + i slope (q-mu)).
/// rate > 0 is enforced; every state in the library is a finite sum of these,
/// so overlaps, norms, moments and Gaussian damping stay closed-form.
class GaussPolyWave {
 public:
  GaussPolyWave(std::vector<WaveTerm> terms, HPReal rate, HPReal center,
                HPReal slope);

  const std::vector<WaveTerm>& terms() const { return terms_; }
  const HPReal& rate() const { return rate_; }
  const HPReal& center() const { return center_; }
  const HPReal& slope() const { return slope_; }
  unsigned degree() const;
  mpfr_prec_t precision() const { return rate_.precision(); }

  HPComplex eval(const HPReal& q) const;

  GaussPolyWave scaled(const HPComplex& c) const;
  GaussPolyWave scaled(const HPReal& c) const;
  /// psi(q - dq): the same shape translated right by dq.
  GaussPolyWave translated(const HPReal& dq) const;
  /// e^{-i beta q} psi(q).
  GaussPolyWave phase_multiplied(const HPReal& beta) const;
  /// psi(-q).
  GaussPolyWave mirrored() const;
  /// e^{-lambda q^2 / 4} psi(q), recentered back into canonical form.
  GaussPolyWave gaussian_weighted(const HPReal& lambda) const;

 private:
  std::vector<WaveTerm> terms_;
  HPReal rate_, center_, slope_;
};

/// Closed-form integral of conj(x) * y over the line.
HPComplex overlap(const GaussPolyWave& x, const GaussPolyWave& y);

/// Finite superposition of GaussPolyWave components ("comb"). The optional
/// norm certificate records that normalized() verified unit norm, so
/// downstream contracts can trust it without re-deriving the Gram sum.
class CombWave {
 public:
  CombWave() = default;
  CombWave(GaussPolyWave w) { comps_.push_back(std::move(w)); }
  explicit CombWave(std::vector<GaussPolyWave> comps)
      : comps_(std::move(comps)) {}

  const std::vector<GaussPolyWave>& comps() const { return comps_; }
  bool empty() const { return comps_.empty(); }
  mpfr_prec_t precision() const;

  HPComplex eval(const HPReal& q) const;
  HPReal norm2() const;
  /// Unit-norm copy carrying a certificate. Norm below `floor` (relative to
  /// nothing; absolute) signals an identically-zero superposition.
  CombWave normalized(double floor = 1e-60) const;
  const std::optional<HPReal>& norm_certificate() const { return cert_; }

  CombWave scaled(const HPComplex& c) const;
  CombWave translated(const HPReal& dq) const;       // norm-preserving
  CombWave phase_multiplied(const HPReal& beta) const;  // norm-preserving
  CombWave mirrored() const;                          // norm-preserving
  CombWave gaussian_weighted(const HPReal& lambda) const;

 private:
  std::vector<GaussPolyWave> comps_;
  std::optional<HPReal> cert_;
};

HPComplex overlap(const CombWave& x, const CombWave& y);

}  // namespace gkp
