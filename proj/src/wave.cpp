#include "gkp/wave.hpp"

#include <algorithm>

namespace gkp {

namespace {

// Dense complex coefficients of sum_t c_t (u + d)^power_t.
std::vector<HPComplex> expand_shifted(const std::vector<WaveTerm>& terms,
                                      const HPReal& d, bool conj,
                                      mpfr_prec_t prec) {
  unsigned deg = 0;
  for (const auto& t : terms) deg = std::max(deg, t.power);
  std::vector<HPComplex> out(deg + 1, HPComplex::zero(prec));
  if (d.is_zero()) {
    for (const auto& t : terms) out[t.power] += conj ? t.coeff.conj() : t.coeff;
    return out;
  }
  std::vector<HPReal> dpow;
  dpow.push_back(HPReal::of(1L, prec));
  for (unsigned i = 1; i <= deg; ++i) dpow.push_back(dpow[i - 1] * d);
  for (const auto& t : terms) {
    HPComplex c = conj ? t.coeff.conj() : t.coeff;
    for (unsigned m = 0; m <= t.power; ++m)
      out[m] += (binomial(t.power, m, prec) * dpow[t.power - m]) * c;
  }
  return out;
}

std::vector<HPComplex> convolve(const std::vector<HPComplex>& a,
                                const std::vector<HPComplex>& b,
                                mpfr_prec_t prec) {
  std::vector<HPComplex> out(a.size() + b.size() - 1, HPComplex::zero(prec));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

GaussPolyWave::GaussPolyWave(std::vector<WaveTerm> terms, HPReal rate,
                             HPReal center, HPReal slope)
    : terms_(std::move(terms)),
      rate_(std::move(rate)),
      center_(std::move(center)),
      slope_(std::move(slope)) {
  if (rate_.sign() <= 0)
    throw DomainError("GaussPolyWave: Gaussian rate must be positive");
  if (terms_.empty()) throw DomainError("GaussPolyWave: empty polynomial");
}

unsigned GaussPolyWave::degree() const {
  unsigned deg = 0;
  for (const auto& t : terms_) deg = std::max(deg, t.power);
  return deg;
}

HPComplex GaussPolyWave::eval(const HPReal& q) const {
  mpfr_prec_t prec = std::max(q.precision(), precision());
  HPReal u = q - center_;
  // sparse power walk; terms are not assumed sorted
  HPComplex poly = HPComplex::zero(prec);
  for (const auto& t : terms_)
    poly += pow(u, static_cast<long>(t.power)) * t.coeff;
  HPReal mag = exp(-rate_ * u * u / HPReal::of(2L, prec));
  return (mag * poly) * HPComplex::unit_phase(slope_ * u);
}

GaussPolyWave GaussPolyWave::scaled(const HPComplex& c) const {
  auto terms = terms_;
  for (auto& t : terms) t.coeff = t.coeff * c;
  return {std::move(terms), rate_, center_, slope_};
}

GaussPolyWave GaussPolyWave::scaled(const HPReal& c) const {
  return scaled(HPComplex(c));
}

GaussPolyWave GaussPolyWave::translated(const HPReal& dq) const {
  return {terms_, rate_, center_ + dq, slope_};
}

GaussPolyWave GaussPolyWave::phase_multiplied(const HPReal& beta) const {
  // e^{-i beta q} = e^{-i beta (q-mu)} e^{-i beta mu}
  HPComplex c = HPComplex::unit_phase(-beta * center_);
  auto terms = terms_;
  for (auto& t : terms) t.coeff = t.coeff * c;
  return {std::move(terms), rate_, center_, slope_ - beta};
}

GaussPolyWave GaussPolyWave::mirrored() const {
  auto terms = terms_;
  for (auto& t : terms)
    if (t.power % 2 == 1) t.coeff = -t.coeff;
  return {std::move(terms), rate_, -center_, -slope_};
}

GaussPolyWave GaussPolyWave::gaussian_weighted(const HPReal& lambda) const {
  mpfr_prec_t prec = std::max(precision(), lambda.precision());
  if (lambda.sign() < 0)
    throw DomainError("gaussian_weighted: negative weight rate");
  HPReal two = HPReal::of(2L, prec);
  HPReal new_rate = rate_ + lambda / two;
  // e^{-l(u+mu)^2/4} merged into e^{-a u^2/2}: complete the square; center
  // shifts by d = -l mu / (2 new_rate) and the polynomial is re-expanded.
  HPReal d = -(lambda * center_) / (two * new_rate);
  auto dense = expand_shifted(terms_, d, /*conj=*/false, prec);
  HPReal log_scale = lambda * lambda * center_ * center_ /
                         (HPReal::of(8L, prec) * new_rate) -
                     lambda * center_ * center_ / HPReal::of(4L, prec);
  HPComplex scale = exp(log_scale) * HPComplex::unit_phase(slope_ * d);
  std::vector<WaveTerm> terms;
  for (unsigned m = 0; m < dense.size(); ++m)
    terms.push_back({dense[m] * scale, m});
  return {std::move(terms), new_rate, center_ + d, slope_};
}

HPComplex overlap(const GaussPolyWave& x, const GaussPolyWave& y) {
  mpfr_prec_t prec = std::max(x.precision(), y.precision());
  HPReal two = HPReal::of(2L, prec);
  HPReal A = x.rate() + y.rate();
  HPReal mu = (x.rate() * x.center() + y.rate() * y.center()) / A;
  HPReal B = y.slope() - x.slope();
  // exponent constants in the cancellation-free product form
  HPReal dx = x.center() - y.center();
  HPReal real_const = -(x.rate() * y.rate() * dx * dx) / (two * A);
  HPReal phase_const =
      B * mu + x.slope() * x.center() - y.slope() * y.center();
  auto px = expand_shifted(x.terms(), mu - x.center(), /*conj=*/true, prec);
  auto py = expand_shifted(y.terms(), mu - y.center(), /*conj=*/false, prec);
  auto poly = convolve(px, py, prec);
  auto mom = gauss_moment_table(static_cast<unsigned>(poly.size()) - 1,
                                A.at_precision(prec), B.at_precision(prec));
  HPComplex sum = HPComplex::zero(prec);
  for (size_t j = 0; j < poly.size(); ++j) sum += poly[j] * mom[j];
  return (exp(real_const) * sum) * HPComplex::unit_phase(phase_const);
}

mpfr_prec_t CombWave::precision() const {
  mpfr_prec_t p = 64;
  for (const auto& c : comps_) p = std::max(p, c.precision());
  return p;
}

HPComplex CombWave::eval(const HPReal& q) const {
  HPComplex sum = HPComplex::zero(std::max(q.precision(), precision()));
  for (const auto& c : comps_) sum += c.eval(q);
  return sum;
}

HPReal CombWave::norm2() const {
  if (comps_.empty()) throw DomainError("CombWave: empty superposition");
  mpfr_prec_t prec = precision();
  HPReal diag = HPReal::of(0L, prec), cross = HPReal::of(0L, prec);
  for (size_t i = 0; i < comps_.size(); ++i) {
    diag += overlap(comps_[i], comps_[i]).re;
    for (size_t j = i + 1; j < comps_.size(); ++j)
      cross += overlap(comps_[i], comps_[j]).re;
  }
  return diag + HPReal::of(2L, prec) * cross;
}

CombWave CombWave::normalized(double floor) const {
  HPReal n2 = norm2();
  mpfr_prec_t prec = precision();
  if (n2 < HPReal::of(floor, prec))
    throw ZeroVectorError("CombWave::normalized: vanishing norm");
  HPReal inv = HPReal::of(1L, prec) / sqrt(n2);
  CombWave out = scaled(HPComplex(inv));
  out.cert_ = out.norm2();
  return out;
}

CombWave CombWave::scaled(const HPComplex& c) const {
  std::vector<GaussPolyWave> comps;
  comps.reserve(comps_.size());
  for (const auto& w : comps_) comps.push_back(w.scaled(c));
  return CombWave(std::move(comps));
}

CombWave CombWave::translated(const HPReal& dq) const {
  std::vector<GaussPolyWave> comps;
  comps.reserve(comps_.size());
  for (const auto& w : comps_) comps.push_back(w.translated(dq));
  CombWave out(std::move(comps));
  out.cert_ = cert_;
  return out;
}

CombWave CombWave::phase_multiplied(const HPReal& beta) const {
  std::vector<GaussPolyWave> comps;
  comps.reserve(comps_.size());
  for (const auto& w : comps_) comps.push_back(w.phase_multiplied(beta));
  CombWave out(std::move(comps));
  out.cert_ = cert_;
  return out;
}

CombWave CombWave::mirrored() const {
  std::vector<GaussPolyWave> comps;
  comps.reserve(comps_.size());
  for (const auto& w : comps_) comps.push_back(w.mirrored());
  CombWave out(std::move(comps));
  out.cert_ = cert_;
  return out;
}

CombWave CombWave::gaussian_weighted(const HPReal& lambda) const {
  std::vector<GaussPolyWave> comps;
  comps.reserve(comps_.size());
  for (const auto& w : comps_) comps.push_back(w.gaussian_weighted(lambda));
  return CombWave(std::move(comps));
}

HPComplex overlap(const CombWave& x, const CombWave& y) {
  if (x.empty() || y.empty()) throw DomainError("overlap: empty superposition");
  HPComplex sum = HPComplex::zero(std::max(x.precision(), y.precision()));
  for (const auto& a : x.comps())
    for (const auto& b : y.comps()) sum += overlap(a, b);
  return sum;
}

}  // namespace gkp
