#include "gkp/optimize.hpp"

#include <algorithm>

namespace gkp {

ScalarMax golden_section_max(const RealFn& f, const HPReal& lo,
                             const HPReal& hi, double tol_abs) {
  if (!(lo < hi)) throw DomainError("golden_section_max: empty interval");
  mpfr_prec_t prec = lo.precision();
  HPReal tol = HPReal::of(tol_abs, prec);
  // inverse golden ratio (sqrt(5) - 1) / 2
  HPReal phi = (sqrt(HPReal::of(5L, prec)) - HPReal::of(1L, prec)) /
               HPReal::of(2L, prec);
  HPReal a = lo, b = hi;
  HPReal c = b - phi * (b - a);
  HPReal d = a + phi * (b - a);
  HPReal fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
}

HPReal bisect_predicate(const std::function<bool(const HPReal&)>& pred,
                        const HPReal& lo, const HPReal& hi, double tol_abs) {
  if (!(lo < hi)) throw DomainError("bisect_predicate: empty interval");
  mpfr_prec_t prec = lo.precision();
  HPReal tol = HPReal::of(tol_abs, prec);
  HPReal half = HPReal::of(0.5, prec);
  if (pred(hi)) return hi;
  HPReal good = lo, bad = hi;
  while (bad - good > tol) {
    HPReal mid = half * (good + bad);
    if (pred(mid))
      good = mid;
    else
      bad = mid;
  }
  return good;
}

HPReal bisect_crossing(const RealFn& f, const HPReal& lo, const HPReal& hi,
                       const HPReal& target, double tol_abs) {
  if (!(lo < hi)) throw DomainError("bisect_crossing: empty interval");
  mpfr_prec_t prec = lo.precision();
  HPReal tol = HPReal::of(tol_abs, prec);
  HPReal half = HPReal::of(0.5, prec);
  HPReal a = lo, b = hi;
  HPReal fa = f(a) - target;
  HPReal fb = f(b) - target;
  if (fa.sign() == 0) return a;
  if (fb.sign() == 0) return b;
  if (fa.sign() == fb.sign())
    throw DomainError("bisect_crossing: endpoints do not bracket the target");
  while (b - a > tol) {
    HPReal mid = half * (a + b);
    HPReal fm = f(mid) - target;
    if (fm.sign() == 0) return mid;
    if (fm.sign() == fa.sign()) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return half * (a + b);
}

namespace {
std::array<double, 2> clamp2(std::array<double, 2> x,
                             const std::array<double, 2>& lo,
                             const std::array<double, 2>& hi) {
  for (int i = 0; i < 2; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}
}  // namespace

SimplexResult nelder_mead_max(
    const std::function<double(const std::array<double, 2>&)>& f,
    std::array<double, 2> start, std::array<double, 2> step,
    std::array<double, 2> lo, std::array<double, 2> hi, double param_tol,
    int max_iter) {
  struct Vertex {
    std::array<double, 2> x;
    double v;
  };
  auto eval = [&](std::array<double, 2> x) {
    x = clamp2(x, lo, hi);
    return Vertex{x, f(x)};
  };
  std::array<Vertex, 3> s = {
      eval(start),
      eval({start[0] + step[0], start[1]}),
      eval({start[0], start[1] + step[1]}),
  };
  auto order = [&] {
    std::sort(s.begin(), s.end(),
              [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
  };
  order();
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    double diam = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = i + 1; j < 3; ++j)
        diam = std::max({diam, std::abs(s[i].x[0] - s[j].x[0]),
                         std::abs(s[i].x[1] - s[j].x[1])});
    if (diam < param_tol) {
      converged = true;
      break;
    }
    std::array<double, 2> centroid = {(s[0].x[0] + s[1].x[0]) / 2,
                                      (s[0].x[1] + s[1].x[1]) / 2};
    auto along = [&](double t) {
      return eval({centroid[0] + t * (centroid[0] - s[2].x[0]),
                   centroid[1] + t * (centroid[1] - s[2].x[1])});
    };
    Vertex refl = along(1.0);
    if (refl.v > s[0].v) {
      Vertex exp = along(2.0);
      s[2] = exp.v > refl.v ? exp : refl;
    } else if (refl.v > s[1].v) {
      s[2] = refl;
    } else {
      Vertex contr = along(refl.v > s[2].v ? 0.5 : -0.5);
      if (contr.v > std::max(refl.v, s[2].v)) {
        s[2] = contr;
      } else {
        // shrink toward the best vertex
        for (int i = 1; i < 3; ++i)
          s[i] = eval({(s[0].x[0] + s[i].x[0]) / 2, (s[0].x[1] + s[i].x[1]) / 2});
      }
    }
    order();
  }
  return {s[0].x, s[0].v, converged};
}

}  // namespace gkp
