#pragma once

#include <optional>
#include <utility>

#include "gkp/cache.hpp"
#include "gkp/povm.hpp"

namespace gkp {

struct POptCandidate {
  long l;           // lattice index of the search interval
  HPReal p;         // per-interval fidelity maximizer
  HPReal fidelity;  // fidelity to the ideal three-peak reference
};

struct POptResult {
  int n;
  HPReal p_opt;
  HPReal fidelity;  // at p_opt
  std::vector<POptCandidate> candidates;
};

/// Search every lattice interval whose reference-density peak carries at
/// least 1% of the global peak for the outcome maximizing fidelity to the
/// ideal three-peak state; p_opt is the global argmax.
POptResult find_p_opt(const ApproxBreeder& breeder);
POptResult find_p_opt(int n, const PrecisionContext& ctx);

struct WindowEntry {
  HPReal p;
  HPReal epsilon;
  HPReal fidelity_to_popt;
};

struct AcceptanceWindows {
  int n;
  HPReal p_opt;
  std::vector<WindowEntry> entries;
  HPReal p_sum;                    // summed window probability
  std::vector<std::string> notes;  // soft-expectation violations etc.
};

/// Keep candidates heralding states with fidelity > 0.999 to the p_opt state;
/// calibrate each half-width by bisection so the edge states stay >= 0.999
/// faithful to the window center; sum the window probabilities.
AcceptanceWindows build_windows(const ApproxBreeder& breeder,
                                const HPReal& p_opt,
                                const std::vector<POptCandidate>& candidates);

struct PostselectRecord {
  int n;
  std::optional<HPReal> r_d_opt;  // empty = no-damping branch
  HPReal xi_opt;
  HPReal fidelity;
  HPReal p_damp;  // 1 on the no-damping branch
  HPReal p_sum;
  HPReal p_total;
  HPReal gk_value;
  bool optimizer_converged;
  bool boundary_triggered;  // 2-D optimum sat on the no-damping edge
};

/// Maximize the damped-state fidelity to a finite-squeezed grid target over
/// (r_d, xi): coarse grid then simplex polish. The no-damping branch
/// (xi-only re-optimization) is taken when the polished r_d reaches the
/// identity end of the box or n >= 27.
PostselectRecord optimize_damping_and_target(const ApproxBreeder& breeder,
                                             const HPReal& p_opt,
                                             const HPReal& p_sum);

/// find_p_opt -> build_windows -> optimize_damping_and_target.
PostselectRecord run_postselect(int n, const PrecisionContext& ctx);

struct WTRecord {
  int n;
  HPReal upsilon;
  std::vector<std::pair<HPReal, HPReal>> regions;  // disjoint, sorted
  HPReal p_upsilon;
  HPReal p_wt;
};

/// Feed-forward protocol: find the outcome regions where the corrected
/// state's no-error probability clears upsilon (grid scan + edge bisection to
/// width 1e-3, exploiting h(p) = h(-p)), then integrate the homodyne density
/// over them.
WTRecord wt_regions(const ApproxBreeder& breeder, const HPReal& upsilon,
                    const HPReal& p_max, const HPReal& grid_step);
WTRecord wt_regions(int n, const HPReal& upsilon, const HPReal& p_max,
                    const HPReal& grid_step, const PrecisionContext& ctx);

struct SweepSpec {
  std::string op;  // registry name, see sweep_ops()
  std::vector<nlohmann::json> cells;
  long bits = 256;
  unsigned workers = 1;
  std::string cache_dir;  // empty disables caching
};

struct CellOutcome {
  nlohmann::json params;
  nlohmann::json result;   // null when errored
  std::string error;       // empty on success, else "code: message"
  bool cached = false;
};

/// Deterministic sweep over independent cells; per-cell failures are recorded,
/// never abort the sweep; results are cached content-addressed when a cache
/// directory is configured.
std::vector<CellOutcome> run_sweep(const SweepSpec& spec);
std::vector<std::string> sweep_ops();

/// JSON record forms used by run_sweep and the CLI (scalars as 25-digit
/// decimal strings so cached bytes reproduce exactly).
nlohmann::json to_json(const PostselectRecord& r);
nlohmann::json to_json(const WTRecord& r);
nlohmann::json to_json(const AcceptanceWindows& w);

}  // namespace gkp
