// Benchmark: OpenMP-parallel sweep execution vs the serial reference path.
// Both paths run the same cells; results must agree byte-for-byte (the
// parallel path only distributes cells, it never reorders arithmetic inside
// one cell).  Exits nonzero on mismatch so it doubles as a determinism check.
#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gkp/breeding_approx.hpp"
#include "gkp/hp.hpp"
#include "gkp/parallel.hpp"
#include "gkp/pipeline.hpp"
#include "gkp/serialize.hpp"

namespace {

using nlohmann::json;

double now_minus(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<gkp::CellOutcome> timed_sweep(const gkp::SweepSpec& spec,
                                          double& seconds) {
  auto t0 = std::chrono::steady_clock::now();
  auto out = gkp::run_sweep(spec);
  seconds = now_minus(t0);
  return out;
}

bool same_results(const std::vector<gkp::CellOutcome>& a,
                  const std::vector<gkp::CellOutcome>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].result.dump() != b[i].result.dump()) return false;
    if (a[i].error != b[i].error) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial-vs-parallel sweep benchmark"};
  int n = 8;
  unsigned cells = 6;
  unsigned workers = 0;  // 0: use the OpenMP default thread count
  unsigned bits = 256;
  unsigned grid = 48;
  app.add_option("--n", n, "subtraction order");
  app.add_option("--cells", cells, "sweep cells per run");
  app.add_option("--workers", workers, "parallel worker count (0 = default)");
  app.add_option("--precision-bits", bits, "mantissa bits");
  app.add_option("--grid", grid, "density micro-kernel grid points");
  CLI11_PARSE(app, argc, argv);

  if (workers == 0) {
#ifdef _OPENMP
    workers = static_cast<unsigned>(omp_get_max_threads());
#else
    workers = 1;
#endif
  }

  gkp::PrecisionContext ctx(bits, 1e-20);

  // Micro-kernel: homodyne density over a p-grid through parallel_for.
  gkp::ApproxBreeder breeder(n, ctx);
  std::vector<std::string> serial_vals(grid), parallel_vals(grid);
  auto density_at = [&](size_t i) {
    gkp::HPReal p = ctx.real(static_cast<double>(i)) * ctx.real(0.05);
    return gkp::to_decimal(breeder.density(p));
  };
  auto t0 = std::chrono::steady_clock::now();
  gkp::parallel_for(grid, 1, [&](size_t i) { serial_vals[i] = density_at(i); });
  double micro_serial = now_minus(t0);
  t0 = std::chrono::steady_clock::now();
  gkp::parallel_for(grid, workers,
                    [&](size_t i) { parallel_vals[i] = density_at(i); });
  double micro_parallel = now_minus(t0);
  bool micro_match = serial_vals == parallel_vals;

  // Full sweep cells: finite-resolution POVM points, moderate cost each.
  gkp::SweepSpec spec;
  spec.op = "povm_point";
  spec.bits = bits;
  for (unsigned i = 0; i < cells; ++i) {
    double eps = 0.03 + 0.21 * static_cast<double>(i) /
                            static_cast<double>(cells > 1 ? cells - 1 : 1);
    spec.cells.push_back(json{{"source", "approx"},
                              {"n", n},
                              {"p_tilde", "0"},
                              {"epsilon", gkp::to_decimal(ctx.real(eps))}});
  }
  spec.workers = 1;
  double sweep_serial = 0.0;
  auto serial_out = timed_sweep(spec, sweep_serial);
  spec.workers = workers;
  double sweep_parallel = 0.0;
  auto parallel_out = timed_sweep(spec, sweep_parallel);
  bool sweep_match = same_results(serial_out, parallel_out);

  std::cout << "workers=" << workers << " bits=" << bits << " n=" << n << "\n";
  std::cout << "density_grid points=" << grid << " serial_s=" << micro_serial
            << " parallel_s=" << micro_parallel
            << " speedup=" << (micro_parallel > 0.0
                                   ? micro_serial / micro_parallel
                                   : 0.0)
            << " match=" << (micro_match ? "yes" : "NO") << "\n";
  std::cout << "povm_sweep cells=" << cells << " serial_s=" << sweep_serial
            << " parallel_s=" << sweep_parallel
            << " speedup=" << (sweep_parallel > 0.0
                                   ? sweep_serial / sweep_parallel
                                   : 0.0)
            << " match=" << (sweep_match ? "yes" : "NO") << "\n";
  return (micro_match && sweep_match) ? 0 : 1;
}
