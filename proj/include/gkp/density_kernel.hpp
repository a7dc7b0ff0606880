#pragma once

#include "gkp/wave.hpp"

namespace gkp {

/// One rank term w |psi><psi| of a finite-rank conditional mixed state.
struct KernelTerm {
  HPReal weight;
  CombWave wave;  // normalized (certificate set)
};

/// rho = sum_i w_i |psi_i><psi_i| built from homodyne-window quadrature nodes.
/// Weights are nonnegative and sum to 1 within rel 1e-8; rank = node count.
class DensityKernel {
 public:
  DensityKernel(std::vector<KernelTerm> terms, HPReal window_center,
                HPReal window_halfwidth)
      : terms_(std::move(terms)),
        center_(std::move(window_center)),
        halfwidth_(std::move(window_halfwidth)) {
    if (terms_.empty()) throw ContractError("DensityKernel: no rank terms");
    for (const auto& t : terms_) {
      if (t.weight.sign() < 0)
        throw ContractError("DensityKernel: negative weight");
      if (!t.wave.norm_certificate())
        throw ContractError("DensityKernel: rank wave lacks norm certificate");
    }
    HPReal tr = trace();
    HPReal one = HPReal::of(1L, tr.precision());
    if (!rel_close(tr, one, 1e-8))
      throw ContractError("DensityKernel: trace deviates from 1");
  }

  const std::vector<KernelTerm>& terms() const { return terms_; }
  size_t rank() const { return terms_.size(); }
  const HPReal& window_center() const { return center_; }
  const HPReal& window_halfwidth() const { return halfwidth_; }

  HPReal trace() const {
    HPReal tr = HPReal::of(0L, terms_[0].weight.precision());
    for (const auto& t : terms_) tr += t.weight;
    return tr;
  }

 private:
  std::vector<KernelTerm> terms_;
  HPReal center_, halfwidth_;
};

}  // namespace gkp
