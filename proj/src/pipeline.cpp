#include "gkp/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gkp/optimize.hpp"
#include "gkp/parallel.hpp"
#include "gkp/serialize.hpp"

namespace gkp {
namespace {

constexpr double kFidelityGate = 0.999;  // window survival / calibration gate
constexpr double kEpsilonCap = 0.5;      // calibration search ceiling
constexpr double kEpsilonSoft = 0.12;    // soft expectation, logged not fatal

}  // namespace

POptResult find_p_opt(const ApproxBreeder& breeder) {
  const PrecisionContext& ctx = breeder.context();
  const int n = breeder.n();
  const HPReal r = r_opt(n, ctx);
  // The reference is exactly unit norm; normalized() only installs the
  // certificate so repeated fidelity calls skip the Gram recomputation.
  const CombWave ideal = exact_ideal_wave(r, ctx).normalized();
  const HPReal half_cell = ctx.sqrt_pi() / ctx.real(2L);

  // Heralding-outcome scan. The oscillatory factor takes the same value at
  // every peak outcome, so peak densities decrease strictly in |p_l| and the
  // scan stops at the first sub-threshold shell. The global density maximum
  // sits at p = 0 for both parities (for odd parity that lies between peaks:
  // the envelope gain beats the cosine dip).
  const HPReal global_max =
      max(exact_homodyne_density(n, r, ctx.zero(), ctx),
          exact_homodyne_density(n, r, exact_peak_outcome(n, 0, ctx), ctx));
  const HPReal cutoff = global_max / ctx.real(100L);

  std::vector<long> shells;  // nonnegative scan indices to search
  for (long l = 0;; ++l) {
    if (l > 64)
      throw ProtocolError("find_p_opt: heralding-peak scan did not terminate");
    HPReal pl = exact_peak_outcome(n, l, ctx);
    if (exact_homodyne_density(n, r, pl, ctx) < cutoff) break;
    shells.push_back(l);
  }
  if (shells.empty()) throw ProtocolError("find_p_opt: empty l-range");

  POptResult out{n, ctx.zero(), ctx.real(-1L), {}};
  for (long l : shells) {
    HPReal pl = exact_peak_outcome(n, l, ctx);
    auto objective = [&](const HPReal& p) {
      return fidelity_pure(breeder.breed(p).wave, ideal);
    };
    ScalarMax m =
        golden_section_max(objective, pl - half_cell, pl + half_cell, 1e-4);
    out.candidates.push_back({l, m.x, m.value});
    // Mirrored interval: the bred wave is even in the outcome, so the
    // maximizer and value transfer exactly.
    long mirror = (n % 2 == 0) ? -l : -1 - l;
    if (mirror != l) out.candidates.push_back({mirror, -m.x, m.value});
  }
  std::sort(
      out.candidates.begin(), out.candidates.end(),
      [](const POptCandidate& a, const POptCandidate& b) { return a.l < b.l; });

  // Argmax; mirrored pairs tie bit-exactly, so prefer the smaller |p| and
  // then the nonnegative twin to keep the result deterministic.
  auto better = [](const POptCandidate& c, const POptCandidate& b) {
    if (c.fidelity > b.fidelity) return true;
    if (c.fidelity < b.fidelity) return false;
    HPReal ca = abs(c.p), ba = abs(b.p);
    if (ca < ba) return true;
    if (ba < ca) return false;
    return b.p < c.p;
  };
  const POptCandidate* best = &out.candidates.front();
  for (const auto& c : out.candidates)
    if (better(c, *best)) best = &c;
  out.p_opt = best->p;
  out.fidelity = best->fidelity;
  return out;
}

POptResult find_p_opt(int n, const PrecisionContext& ctx) {
  return find_p_opt(ApproxBreeder(n, ctx));
}

AcceptanceWindows build_windows(const ApproxBreeder& breeder,
                                const HPReal& p_opt,
                                const std::vector<POptCandidate>& candidates) {
  if (candidates.empty())
    throw ProtocolError("build_windows: empty candidate list");
  const PrecisionContext& ctx = breeder.context();
  const HPReal gate = ctx.real(kFidelityGate);
  const CombWave opt_wave = breeder.breed(p_opt).wave;

  AcceptanceWindows out{breeder.n(), p_opt, {}, ctx.zero(), {}};
  for (const auto& cand : candidates) {
    CombWave wave_i = breeder.breed(cand.p).wave;
    HPReal fid = fidelity_pure(wave_i, opt_wave);
    if (!(fid > gate)) continue;

    auto pred = [&](const HPReal& eps) {
      return !(fidelity_pure(breeder.breed(cand.p + eps).wave, wave_i) <
               gate) &&
             !(fidelity_pure(breeder.breed(cand.p - eps).wave, wave_i) < gate);
    };
    HPReal eps =
        bisect_predicate(pred, ctx.zero(), ctx.real(kEpsilonCap), 1e-4);
    if (eps > ctx.real(kEpsilonSoft))
      out.notes.push_back("window half-width " +
                          std::to_string(eps.to_double()) + " at p = " +
                          std::to_string(cand.p.to_double()) +
                          " exceeds the soft bound 0.12");
    out.entries.push_back({cand.p, eps, fid});
    out.p_sum += window_probability(breeder, cand.p, eps);
  }
  if (out.entries.empty())
    throw ProtocolError("build_windows: no candidate above the fidelity gate");
  return out;
}

namespace {

struct XiBox {
  double lo = 0.3;
  double hi = 1.5;
};

// Widen toward whichever edge the optimum touches; callers cap the rounds.
bool widen_if_on_edge(XiBox& box, double xi) {
  bool widened = false;
  if (xi - box.lo <= 1e-3 && box.lo > 0.05 + 1e-12) {
    box.lo = std::max(0.05, box.lo - 0.6);
    widened = true;
  }
  if (box.hi - xi <= 1e-3) {
    box.hi += 1.0;
    widened = true;
  }
  return widened;
}

}  // namespace

PostselectRecord optimize_damping_and_target(const ApproxBreeder& breeder,
                                             const HPReal& p_opt,
                                             const HPReal& p_sum) {
  const PrecisionContext& ctx = breeder.context();
  const int n = breeder.n();
  const CombWave phi = breeder.breed(p_opt).wave;

  constexpr double kRdLo = 0.0, kRdHi = 3.0;  // upper edge = no damping
  constexpr int kGrid = 40;

  auto objective = [&](double rd, double xi) -> HPReal {
    return fidelity_pure(damping_map(phi, ctx.real(rd)).wave,
                         gkp_wave(ctx.real(xi), ctx));
  };

  XiBox box;
  SimplexResult sr{};
  for (int round = 0;; ++round) {
    // Coarse grid; damped rows and target columns are shared across cells.
    std::vector<CombWave> damped, targets;
    damped.reserve(kGrid);
    targets.reserve(kGrid);
    std::array<double, kGrid> rds{}, xis{};
    for (int i = 0; i < kGrid; ++i) {
      rds[i] = kRdLo + (kRdHi - kRdLo) * i / (kGrid - 1);
      xis[i] = box.lo + (box.hi - box.lo) * i / (kGrid - 1);
      damped.push_back(damping_map(phi, ctx.real(rds[i])).wave);
      targets.push_back(gkp_wave(ctx.real(xis[i]), ctx));
    }
    double best = -1.0;
    std::array<double, 2> start{rds[0], xis[0]};
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        double f = fidelity_pure(damped[i], targets[j]).to_double();
        if (f > best) {
          best = f;
          start = {rds[i], xis[j]};
        }
      }
    sr = nelder_mead_max(
        [&](const std::array<double, 2>& x) {
          return objective(x[0], x[1]).to_double();
        },
        start,
        {(kRdHi - kRdLo) / (kGrid - 1), (box.hi - box.lo) / (kGrid - 1)},
        {kRdLo, box.lo}, {kRdHi, box.hi}, 1e-6, 400);
    if (round >= 2 || !widen_if_on_edge(box, sr.x[1])) break;
  }

  const bool boundary = (kRdHi - sr.x[0]) <= 1e-3;
  std::optional<HPReal> rd_opt;
  CombWave final_wave = phi;
  HPReal xi_opt = ctx.zero();
  HPReal fidelity = ctx.zero();
  HPReal p_damp = ctx.one();

  if (boundary || n >= 27) {
    // No-damping branch: re-optimize the target squeezing alone.
    ScalarMax gx{ctx.zero(), ctx.real(-1L)};
    for (int round = 0;; ++round) {
      gx = golden_section_max(
          [&](const HPReal& xi) {
            return fidelity_pure(phi, gkp_wave(xi, ctx));
          },
          ctx.real(box.lo), ctx.real(box.hi), 1e-6);
      if (round >= 2 || !widen_if_on_edge(box, gx.x.to_double())) break;
    }
    xi_opt = gx.x;
    fidelity = gx.value;
  } else {
    HPReal rd = ctx.real(sr.x[0]);
    DampResult dr = damping_map(phi, rd);
    rd_opt = rd;
    xi_opt = ctx.real(sr.x[1]);
    fidelity = fidelity_pure(dr.wave, gkp_wave(xi_opt, ctx));
    p_damp = dr.p_damp;
    final_wave = dr.wave;
  }

  HPReal gk = gk_no_error(final_wave, ctx).value;
  HPReal pg = p_gps(n, ctx);
  return PostselectRecord{n,
                          rd_opt,
                          xi_opt,
                          fidelity,
                          p_damp,
                          p_sum,
                          pg * pg * p_sum * p_damp,
                          gk,
                          sr.converged,
                          boundary};
}

PostselectRecord run_postselect(int n, const PrecisionContext& ctx) {
  ApproxBreeder breeder(n, ctx);
  POptResult popt = find_p_opt(breeder);
  AcceptanceWindows win = build_windows(breeder, popt.p_opt, popt.candidates);
  return optimize_damping_and_target(breeder, popt.p_opt, win.p_sum);
}

WTRecord wt_regions(const ApproxBreeder& breeder, const HPReal& upsilon,
                    const HPReal& p_max, const HPReal& grid_step) {
  const PrecisionContext& ctx = breeder.context();
  const int n = breeder.n();
  if (!(upsilon > ctx.zero()) || !(upsilon < ctx.one()))
    throw DomainError("wt_regions: upsilon must lie in (0, 1)");
  if (!(grid_step > ctx.zero()) || !(p_max > grid_step))
    throw DomainError("wt_regions: need 0 < grid_step < p_max");

  auto density = [&](const HPReal& p) { return breeder.density(p); };
  // The density is even in p; mass outside [-p_max, p_max] must be negligible.
  HPReal mass =
      ctx.real(2L) * gl_integrate(density, ctx.zero(), p_max, 1e-10, ctx).value;
  if (ctx.one() - mass > ctx.real(1e-6))
    throw DomainError(
        "wt_regions: homodyne mass outside [-p_max, p_max] exceeds 1e-6");

  auto h = [&](const HPReal& p) -> HPReal {
    DisplacementDecision dd = breeder.corrective_delta(p);
    return gk_no_error(breeder.displaced_wave(p, dd.delta), ctx).value;
  };

  // Scan the nonnegative half axis; h(p) = h(-p) because both the output wave
  // and the displacement choice are even in the outcome.
  size_t count = static_cast<size_t>(
                     std::ceil(p_max.to_double() / grid_step.to_double())) +
                 1;
  std::vector<HPReal> ps, hs;
  ps.reserve(count);
  hs.reserve(count);
  for (size_t j = 0; j < count; ++j) {
    HPReal pj = min(grid_step * ctx.real(static_cast<long>(j)), p_max);
    ps.push_back(pj);
    hs.push_back(h(pj));
  }

  std::vector<std::pair<HPReal, HPReal>> pos;
  bool inside = !(hs[0] < upsilon);
  HPReal start = ps[0];
  for (size_t j = 1; j < ps.size(); ++j) {
    bool in_j = !(hs[j] < upsilon);
    if (in_j != inside) {
      HPReal x = bisect_crossing(h, ps[j - 1], ps[j], upsilon, 1e-3);
      if (inside)
        pos.emplace_back(start, x);
      else
        start = x;
      inside = in_j;
    }
  }
  if (inside) pos.emplace_back(start, ps.back());

  // Mirror to the negative half axis; a region touching 0 merges with its
  // reflection.
  std::vector<std::pair<HPReal, HPReal>> regions;
  for (size_t k = pos.size(); k-- > 0;)
    if (!pos[k].first.is_zero())
      regions.emplace_back(-pos[k].second, -pos[k].first);
  size_t skip = 0;
  if (!pos.empty() && pos.front().first.is_zero()) {
    regions.emplace_back(-pos.front().second, pos.front().second);
    skip = 1;
  }
  for (size_t k = skip; k < pos.size(); ++k) regions.push_back(pos[k]);

  HPReal two_step = grid_step * ctx.real(2L);
  HPReal p_upsilon = ctx.zero();
  for (const auto& reg : regions) {
    if (reg.second - reg.first < two_step)
      throw GridTooCoarseError(
          "wt_regions: region narrower than twice the grid step; rerun with a "
          "finer grid");
    p_upsilon += gl_integrate(density, reg.first, reg.second, 1e-10, ctx).value;
  }
  HPReal pg = p_gps(n, ctx);
  return WTRecord{n, upsilon, std::move(regions), p_upsilon,
                  pg * pg * p_upsilon};
}

WTRecord wt_regions(int n, const HPReal& upsilon, const HPReal& p_max,
                    const HPReal& grid_step, const PrecisionContext& ctx) {
  return wt_regions(ApproxBreeder(n, ctx), upsilon, p_max, grid_step);
}

namespace {

HPReal param_real(const nlohmann::json& params, const char* key,
                  const PrecisionContext& ctx, const char* fallback) {
  if (!params.contains(key)) {
    if (fallback == nullptr)
      throw DomainError(std::string("sweep cell: missing parameter '") + key +
                        "'");
    return ctx.parse(fallback);
  }
  const auto& v = params.at(key);
  if (v.is_string()) return ctx.parse(v.get<std::string>());
  if (v.is_number()) return ctx.real(v.get<double>());
  throw DomainError(std::string("sweep cell: parameter '") + key +
                    "' must be a number or decimal string");
}

int param_int(const nlohmann::json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number_integer())
    throw DomainError(std::string("sweep cell: missing integer parameter '") +
                      key + "'");
  return params.at(key).get<int>();
}

nlohmann::json op_postselect(const nlohmann::json& params,
                             const PrecisionContext& ctx) {
  return to_json(run_postselect(param_int(params, "n"), ctx));
}

nlohmann::json op_wt(const nlohmann::json& params,
                     const PrecisionContext& ctx) {
  int n = param_int(params, "n");
  HPReal upsilon = param_real(params, "upsilon", ctx, nullptr);
  HPReal p_max = params.contains("p_max")
                     ? param_real(params, "p_max", ctx, nullptr)
                     : ctx.real(4L) * ctx.sqrt_pi();
  HPReal step = param_real(params, "grid_step", ctx, "0.05");
  ApproxBreeder breeder(n, ctx);
  for (int attempt = 0;; ++attempt) {
    try {
      nlohmann::json j = to_json(wt_regions(breeder, upsilon, p_max, step));
      j["grid_step_used"] = to_decimal(step);
      return j;
    } catch (const GridTooCoarseError&) {
      if (attempt >= 3) throw;
      step = step / ctx.real(2L);
    }
  }
}

nlohmann::json op_figa2_point(const nlohmann::json& params,
                              const PrecisionContext& ctx) {
  int n = param_int(params, "n");
  HPReal p_max = params.contains("p_max")
                     ? param_real(params, "p_max", ctx, nullptr)
                     : ctx.real(4L) * ctx.sqrt_pi();
  size_t points =
      params.contains("points") ? params.at("points").get<size_t>() : 321;
  std::vector<HPReal> grid = uniform_grid(-p_max, p_max, points);
  HPReal fid = approx_vs_exact_fidelity(n, ctx.zero(), ctx);
  KLResult kl = kl_divergence_vs_exact(n, grid, ctx);
  return nlohmann::json{{"n", n},
                        {"fidelity", to_decimal(fid)},
                        {"kl", to_decimal(kl.value)},
                        {"support_clamped", kl.support_clamped}};
}

nlohmann::json op_povm_point(const nlohmann::json& params,
                             const PrecisionContext& ctx) {
  std::string src = params.value("source", std::string("approx"));
  int n = param_int(params, "n");
  HPReal p_tilde = param_real(params, "p_tilde", ctx, "0");
  HPReal eps = param_real(params, "epsilon", ctx, nullptr);
  unsigned nodes =
      params.contains("nodes") ? params.at("nodes").get<unsigned>() : 21u;

  if (src == "exact") {
    HPReal r = params.contains("r") ? param_real(params, "r", ctx, nullptr)
                                    : r_opt(n, ctx);
    FiniteResState st =
        finite_res_state(ExactSource{n, r}, p_tilde, eps, nodes, ctx);
    HPReal fid = fidelity_pure_mixed(exact_breed_wave(n, r, p_tilde, ctx).wave,
                                     st.kernel);
    return nlohmann::json{{"probability", to_decimal(st.probability)},
                          {"fidelity", to_decimal(fid)}};
  }
  if (src != "approx")
    throw DomainError("sweep cell: source must be 'approx' or 'exact'");
  ApproxBreeder breeder(n, ctx);
  FiniteResState st =
      finite_res_state(ApproxSource{n}, p_tilde, eps, nodes, ctx);
  HPReal fid = fidelity_pure_mixed(breeder.breed(p_tilde).wave, st.kernel);
  return nlohmann::json{{"probability", to_decimal(st.probability)},
                        {"fidelity", to_decimal(fid)}};
}

using OpFn = nlohmann::json (*)(const nlohmann::json&,
                                const PrecisionContext&);

const std::map<std::string, OpFn>& op_registry() {
  static const std::map<std::string, OpFn> kOps{
      {"postselect", &op_postselect},
      {"wt", &op_wt},
      {"figA2_point", &op_figa2_point},
      {"povm_point", &op_povm_point}};
  return kOps;
}

}  // namespace

std::vector<CellOutcome> run_sweep(const SweepSpec& spec) {
  const auto& ops = op_registry();
  auto it = ops.find(spec.op);
  if (it == ops.end())
    throw DomainError("run_sweep: unknown operation '" + spec.op + "'");
  if (spec.bits < 64) throw DomainError("run_sweep: mantissa bits below 64");
  if (spec.workers < 1) throw DomainError("run_sweep: workers must be >= 1");

  std::optional<SweepCache> cache;
  if (!spec.cache_dir.empty()) cache.emplace(spec.cache_dir);

  std::vector<CellOutcome> out(spec.cells.size());
  OpFn fn = it->second;
  parallel_for(spec.cells.size(), spec.workers, [&](size_t i) {
    const nlohmann::json& params = spec.cells[i];
    CellOutcome& cell = out[i];
    cell.params = params;
    std::string hash = SweepCache::key_hash(spec.op, params, spec.bits);
    if (cache) {
      if (auto hit = cache->get(hash)) {
        cell.result = *hit;
        cell.cached = true;
        return;
      }
    }
    try {
      PrecisionContext ctx(static_cast<unsigned>(spec.bits), 1e-20);
      cell.result = fn(params, ctx);
      if (cache) {
        nlohmann::json key{
            {"op", spec.op}, {"params", params}, {"bits", spec.bits}};
        cache->put(hash, key, cell.result);
      }
    } catch (const Error& e) {
      cell.error = e.code() + ": " + e.what();
    } catch (const std::exception& e) {
      cell.error = std::string("internal: ") + e.what();
    }
  });
  return out;
}

std::vector<std::string> sweep_ops() {
  std::vector<std::string> names;
  for (const auto& entry : op_registry()) names.push_back(entry.first);
  return names;
}

nlohmann::json to_json(const PostselectRecord& r) {
  nlohmann::json j{{"n", r.n},
                   {"xi_opt", to_decimal(r.xi_opt)},
                   {"fidelity", to_decimal(r.fidelity)},
                   {"p_damp", to_decimal(r.p_damp)},
                   {"p_sum", to_decimal(r.p_sum)},
                   {"p_total", to_decimal(r.p_total)},
                   {"gk_no_error", to_decimal(r.gk_value)},
                   {"optimizer_converged", r.optimizer_converged},
                   {"boundary_triggered", r.boundary_triggered}};
  j["r_d_opt"] =
      r.r_d_opt ? nlohmann::json(to_decimal(*r.r_d_opt)) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const WTRecord& r) {
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& reg : r.regions)
    regions.push_back({to_decimal(reg.first), to_decimal(reg.second)});
  return nlohmann::json{{"n", r.n},
                        {"upsilon", to_decimal(r.upsilon)},
                        {"regions", regions},
                        {"p_upsilon", to_decimal(r.p_upsilon)},
                        {"p_wt", to_decimal(r.p_wt)}};
}

nlohmann::json to_json(const AcceptanceWindows& w) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : w.entries)
    entries.push_back({{"p", to_decimal(e.p)},
                       {"epsilon", to_decimal(e.epsilon)},
                       {"fidelity_to_popt", to_decimal(e.fidelity_to_popt)}});
  return nlohmann::json{{"n", w.n},
                        {"p_opt", to_decimal(w.p_opt)},
                        {"entries", entries},
                        {"p_sum", to_decimal(w.p_sum)},
                        {"notes", w.notes}};
}

}  // namespace gkp
