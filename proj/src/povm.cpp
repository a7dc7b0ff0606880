#include "gkp/povm.hpp"

#include <memory>
#include <utility>

namespace gkp {

namespace {

struct SourceFns {
  std::function<HPReal(const HPReal&)> density;
  std::function<CombWave(const HPReal&)> wave;
};

SourceFns bind_source(const PovmSource& source, const ApproxBreeder*& breeder,
                      std::unique_ptr<ApproxBreeder>& owned,
                      const PrecisionContext& ctx) {
  if (const auto* a = std::get_if<ApproxSource>(&source)) {
    owned = std::make_unique<ApproxBreeder>(a->n, ctx);
    breeder = owned.get();
    const ApproxBreeder* b = breeder;
    return {[b](const HPReal& p) { return b->density(p); },
            [b](const HPReal& p) { return b->breed(p).wave; }};
  }
  const auto& e = std::get<ExactSource>(source);
  int kappa = e.kappa;
  HPReal r = e.r;
  return {[kappa, r, &ctx](const HPReal& p) {
            return exact_homodyne_density(kappa, r, p, ctx);
          },
          [kappa, r, &ctx](const HPReal& p) {
            return exact_breed_wave(kappa, r, p, ctx).wave;
          }};
}

// Window quadrature of the density with an explicit fixed-order rule;
// the node set here is exactly the rank support of the kernel.
HPReal window_sum(const std::function<HPReal(const HPReal&)>& density,
                  const HPReal& center, const HPReal& half, unsigned order,
                  const PrecisionContext& ctx,
                  std::vector<std::pair<HPReal, HPReal>>* nodes_out) {
  const GLRule& rule = gl_rule(order, ctx.bits());
  HPReal total = ctx.zero();
  for (unsigned i = 0; i < order; ++i) {
    HPReal p = center + half * rule.nodes[i];
    HPReal w = half * rule.weights[i] * density(p);
    if (nodes_out) nodes_out->push_back({p, w});
    total += w;
  }
  return total;
}

}  // namespace

FiniteResState finite_res_state(const PovmSource& source, const HPReal& p_tilde,
                                const HPReal& epsilon, unsigned nodes,
                                const PrecisionContext& ctx) {
  if (epsilon.sign() <= 0)
    throw DomainError("finite_res_state: epsilon must be > 0");
  if (nodes < 5) throw DomainError("finite_res_state: need at least 5 nodes");
  const ApproxBreeder* breeder = nullptr;
  std::unique_ptr<ApproxBreeder> owned;
  SourceFns fns = bind_source(source, breeder, owned, ctx);
  HPReal center = p_tilde.at_precision(ctx.bits());
  HPReal half = epsilon.at_precision(ctx.bits());

  std::vector<std::pair<HPReal, HPReal>> node_weights;
  HPReal prob = window_sum(fns.density, center, half, nodes, ctx, &node_weights);
  HPReal prob2 = window_sum(fns.density, center, half, 2 * nodes, ctx, nullptr);
  if (!rel_close(prob, prob2, 1e-8))
    throw ResolutionError(
        "finite_res_state: window quadrature did not converge at the "
        "requested node count");
  if (prob.sign() <= 0)
    throw DomainError("finite_res_state: window has no probability mass");

  std::vector<KernelTerm> terms;
  terms.reserve(node_weights.size());
  for (auto& [p, w] : node_weights)
    terms.push_back({w / prob, fns.wave(p)});
  return {DensityKernel(std::move(terms), center, half), prob};
}

HPReal window_probability(const ApproxBreeder& breeder, const HPReal& p_tilde,
                          const HPReal& epsilon) {
  if (epsilon.sign() <= 0)
    throw DomainError("window_probability: epsilon must be > 0");
  const PrecisionContext& ctx = breeder.context();
  HPReal lo = p_tilde.at_precision(ctx.bits()) - epsilon;
  HPReal hi = p_tilde.at_precision(ctx.bits()) + epsilon;
  RealFn f = [&](const HPReal& p) { return breeder.density(p); };
  return gl_integrate(f, lo, hi, 1e-12, ctx).value;
}

HPReal window_probability(int n, const HPReal& p_tilde, const HPReal& epsilon,
                          const PrecisionContext& ctx) {
  return window_probability(ApproxBreeder(n, ctx), p_tilde, epsilon);
}

}  // namespace gkp
