#include "gkp/states.hpp"

namespace gkp {

HPReal r_opt(int n, const PrecisionContext& ctx) {
  if (n <= 6)
    throw DomainError("r_opt: peak spacing unreachable for n <= 6");
  HPReal two_pi = ctx.real(2L) * ctx.pi();
  return asech(two_pi / ctx.real(n)) / ctx.real(2L);
}

HPReal r_max(int n, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("r_max: n must be >= 1");
  return acosh(ctx.real(1 + 2L * n)) / ctx.real(2L);
}

HPReal r_crit(int n, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("r_crit: n must be >= 1");
  HPReal arg = ctx.real(2L) * ctx.pi() * ctx.real(1 + 2L * n) / ctx.real(n);
  return -log(arg) / ctx.real(2L);
}

HPReal xi_to_db(const HPReal& xi) {
  HPReal ten = HPReal::of(10L, xi.precision());
  return HPReal::of(20L, xi.precision()) / log(ten) * xi;
}

HPReal xi_from_db(const HPReal& db) {
  HPReal ten = HPReal::of(10L, db.precision());
  return db * log(ten) / HPReal::of(20L, db.precision());
}

CombWave gps_wave(int n, const PrecisionContext& ctx) {
  if (n < 7)
    throw DomainError("gps_wave: n must be >= 7 (peak spacing unreachable)");
  HPReal rate = ctx.real(n) / (ctx.real(2L) * ctx.pi());
  HPReal coeff = pow(rate, ctx.real(2L * n + 1L) / ctx.real(4L)) /
                 sqrt(gamma_fn(ctx.real(0.5) + ctx.real(n)));
  if (n % 2 == 1) coeff = -coeff;  // (-q)^n
  GaussPolyWave w({{HPComplex(coeff), static_cast<unsigned>(n)}}, rate,
                  ctx.zero(), ctx.zero());
  return CombWave(w).normalized();
}

HPReal p_gps(int n, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("p_gps: n must be >= 1");
  unsigned un = static_cast<unsigned>(n);
  HPReal nfact = factorial(un, ctx.bits());
  return pow(ctx.real(2L), -static_cast<long>(n)) *
         pow(ctx.real(n), static_cast<long>(n)) *
         pow(ctx.real(1 + 2L * n), -(ctx.real(0.5) + ctx.real(n))) *
         factorial(2 * un, ctx.bits()) / (nfact * nfact);
}

namespace {

CombWave gkp_raw(const HPReal& xi, int m, const PrecisionContext& ctx) {
  HPReal rate = exp(ctx.real(2L) * xi);
  HPReal env = ctx.real(2L) * ctx.pi() * exp(-ctx.real(2L) * xi);
  HPReal spacing = ctx.real(2L) * ctx.sqrt_pi();
  std::vector<GaussPolyWave> comps;
  comps.reserve(2 * m + 1);
  for (int t = -m; t <= m; ++t) {
    HPReal weight = exp(-env * ctx.real(t) * ctx.real(t));
    comps.emplace_back(
        std::vector<WaveTerm>{{HPComplex(weight), 0u}}, rate,
        spacing * ctx.real(t), ctx.zero());
  }
  return CombWave(std::move(comps));
}

}  // namespace

int gkp_tooth_count(const HPReal& xi, const PrecisionContext& ctx) {
  if (xi.sign() < 0) throw DomainError("gkp_tooth_count: xi must be >= 0");
  HPReal tol = ctx.real(1e-10);
  HPReal prev = gkp_raw(xi, 1, ctx).norm2();
  for (int m = 2; m <= 64; ++m) {
    HPReal cur = gkp_raw(xi, m, ctx).norm2();
    if (abs(cur - prev) <= tol * cur) return m - 1;
    prev = cur;
  }
  throw ConvergenceError("gkp_tooth_count: comb did not converge", 0.0);
}

CombWave gkp_wave(const HPReal& xi, int m, const PrecisionContext& ctx) {
  if (xi.sign() < 0) throw DomainError("gkp_wave: xi must be >= 0");
  if (m < 0) throw DomainError("gkp_wave: negative tooth count");
  return gkp_raw(xi, m, ctx).normalized();
}

CombWave gkp_wave(const HPReal& xi, const PrecisionContext& ctx) {
  return gkp_wave(xi, gkp_tooth_count(xi, ctx), ctx);
}

CombWave scss_wave(int kappa, const HPReal& alpha, const HPReal& r,
                   const PrecisionContext& ctx) {
  if (alpha.sign() < 0) throw DomainError("scss_wave: alpha must be >= 0");
  int parity = ((kappa % 2) + 2) % 2;
  HPReal center = alpha * exp(r);
  HPReal rate = exp(-ctx.real(2L) * r);
  HPReal minus = parity == 0 ? ctx.one() : -ctx.one();
  std::vector<GaussPolyWave> comps;
  comps.emplace_back(std::vector<WaveTerm>{{HPComplex(ctx.one()), 0u}}, rate,
                     center, ctx.zero());
  comps.emplace_back(std::vector<WaveTerm>{{HPComplex(minus), 0u}}, rate,
                     -center, ctx.zero());
  return CombWave(std::move(comps)).normalized();
}

}  // namespace gkp
