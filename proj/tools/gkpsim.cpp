// Command-line front end: ad-hoc evaluators (`eval`), sweep reproduction with
// CSV/JSON emission and manifests (`repro`), and the property suites
// (`validate`).  Exit codes: 0 ok, 2 validation failure, 3 partial sweep
// failure (> 10% of cells), 4 usage/parameter error.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gkp/breeding_approx.hpp"
#include "gkp/config.hpp"
#include "gkp/errors.hpp"
#include "gkp/hp.hpp"
#include "gkp/metrics.hpp"
#include "gkp/numerics.hpp"
#include "gkp/pipeline.hpp"
#include "gkp/serialize.hpp"
#include "gkp/states.hpp"
#include "gkp/validation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPartialSweep = 3;
constexpr int kExitUsage = 4;

void error_line(const std::string& code, const std::string& message) {
  std::cerr << "error code=" << code << " message=\"" << message << "\"\n";
}

long parse_long(const std::string& text, const char* what) {
  try {
    size_t used = 0;
    long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw gkp::DomainError(std::string(what) + " is not an integer: " + text);
  }
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string expr;
  std::string n, p, k, y, gamma, q, xi;
  bool norm = false;
};

void require_arg(const std::string& value, const char* flag) {
  if (value.empty())
    throw gkp::DomainError(std::string("eval: missing required --") + flag);
}

int cmd_eval(const EvalArgs& a, const gkp::RunConfig& cfg) {
  gkp::PrecisionContext ctx(cfg.precision_bits, 1e-20);
  std::vector<std::pair<std::string, std::string>> out;
  if (a.expr == "theta") {
    require_arg(a.k, "k");
    require_arg(a.y, "y");
    require_arg(a.gamma, "gamma");
    long k = parse_long(a.k, "--k");
    if (k < 0) throw gkp::DomainError("--k must be >= 0");
    out.emplace_back("value", gkp::to_decimal(gkp::theta(
                                  static_cast<unsigned>(k), ctx.parse(a.y),
                                  ctx.parse(a.gamma))));
  } else if (a.expr == "gps") {
    require_arg(a.n, "n");
    int n = static_cast<int>(parse_long(a.n, "--n"));
    if (a.norm)
      out.emplace_back("value", gkp::to_decimal(gkp::gps_wave(n, ctx).norm2()));
    else
      out.emplace_back("value", gkp::to_decimal(gkp::p_gps(n, ctx)));
  } else if (a.expr == "breed") {
    require_arg(a.n, "n");
    require_arg(a.p, "p");
    auto r = gkp::breed_wave(static_cast<int>(parse_long(a.n, "--n")),
                             ctx.parse(a.p), ctx);
    out.emplace_back("norm", gkp::to_decimal(r.norm_N));
    out.emplace_back("density", gkp::to_decimal(r.density));
  } else if (a.expr == "homodyne") {
    require_arg(a.n, "n");
    require_arg(a.p, "p");
    out.emplace_back(
        "value",
        gkp::to_decimal(gkp::homodyne_density(
            static_cast<int>(parse_long(a.n, "--n")), ctx.parse(a.p), ctx)));
  } else if (a.expr == "gfn") {
    require_arg(a.n, "n");
    require_arg(a.p, "p");
    out.emplace_back(
        "value", gkp::to_decimal(gkp::g_fn(
                     static_cast<int>(parse_long(a.n, "--n")), ctx.parse(a.p),
                     ctx)));
  } else if (a.expr == "delta") {
    require_arg(a.n, "n");
    require_arg(a.p, "p");
    auto d = gkp::corrective_delta(static_cast<int>(parse_long(a.n, "--n")),
                                   ctx.parse(a.p), ctx);
    out.emplace_back("value", gkp::to_decimal(d.delta));
    out.emplace_back("g", gkp::to_decimal(d.g_value));
  } else if (a.expr == "gk") {
    gkp::GKNoErrorResult r;
    if (!a.xi.empty()) {
      r = gkp::gk_no_error(gkp::gkp_wave(ctx.parse(a.xi), ctx), ctx);
    } else {
      require_arg(a.n, "n");
      int n = static_cast<int>(parse_long(a.n, "--n"));
      gkp::HPReal p = a.p.empty() ? ctx.zero() : ctx.parse(a.p);
      gkp::ApproxBreeder breeder(n, ctx);
      auto d = breeder.corrective_delta(p);
      r = gkp::gk_no_error(breeder.displaced_wave(p, d.delta), ctx);
    }
    out.emplace_back("value", gkp::to_decimal(r.value));
    out.emplace_back("cell_mass", gkp::to_decimal(r.cell_mass));
  } else {
    throw gkp::DomainError("unknown eval expression: " + a.expr);
  }
  for (const auto& kv : out) std::cout << kv.first << "=" << kv.second << "\n";
  std::cout << "bits=" << cfg.precision_bits << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// repro

struct SweepRun {
  std::vector<gkp::CellOutcome> outcomes;
  double wall_s = 0.0;
  size_t cache_hits = 0;
  size_t failed = 0;
};

SweepRun run_cells(const std::string& op, std::vector<json> cells,
                   const gkp::RunConfig& cfg) {
  gkp::SweepSpec spec;
  spec.op = op;
  spec.cells = std::move(cells);
  spec.bits = cfg.precision_bits;
  spec.workers = cfg.workers;
  spec.cache_dir = cfg.cache_dir;
  auto t0 = std::chrono::steady_clock::now();
  SweepRun run;
  run.outcomes = gkp::run_sweep(spec);
  run.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
  for (const auto& c : run.outcomes) {
    if (c.cached) ++run.cache_hits;
    if (!c.error.empty()) ++run.failed;
  }
  return run;
}

void emit_table(const gkp::RunConfig& cfg, const std::string& name,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows) {
  gkp::ensure_directory(cfg.out_dir);
  if (cfg.format == "csv") {
    std::vector<std::string> header;
    header.push_back("figure " + name);
    header.push_back("format_version 1");
    for (const auto& line : gkp::render(cfg)) header.push_back("config " + line);
    for (const auto& line : cfg.given) header.push_back("given " + line);
    gkp::CsvTable table(columns);
    for (const auto& r : rows) table.add_row(r);
    gkp::atomic_write_file(cfg.out_dir + "/" + name + ".csv",
                           table.str(header));
  } else {
    json doc{{"figure", name},
             {"format_version", 1},
             {"config", gkp::render(cfg)},
             {"given", cfg.given},
             {"columns", columns},
             {"rows", rows}};
    gkp::atomic_write_file(cfg.out_dir + "/" + name + ".json",
                           doc.dump(2) + "\n");
  }
}

void emit_manifest(const gkp::RunConfig& cfg, const std::string& name,
                   const SweepRun& run) {
  json errors = json::array();
  for (const auto& c : run.outcomes)
    if (!c.error.empty()) errors.push_back({{"params", c.params},
                                            {"error", c.error}});
  json doc{{"figure", name},
           {"format_version", 1},
           {"precision_bits", cfg.precision_bits},
           {"workers", cfg.workers},
           {"wall_time_s", run.wall_s},
           {"cache_hits", run.cache_hits},
           {"cells_total", run.outcomes.size()},
           {"cells_failed", run.failed},
           {"config", gkp::render(cfg)},
           {"given", cfg.given},
           {"errors", errors}};
  gkp::ensure_directory(cfg.out_dir);
  gkp::atomic_write_file(cfg.out_dir + "/" + name + "_manifest.json",
                         doc.dump(2) + "\n");
}

// "NdB" tokens name a target squeezing; they resolve to the no-error
// probability of the corresponding grid state so that cache keys and output
// columns carry plain decimals.
std::string resolve_upsilon(const std::string& token,
                            const gkp::PrecisionContext& ctx) {
  if (token.size() > 2 && token.compare(token.size() - 2, 2, "dB") == 0) {
    gkp::HPReal db = ctx.parse(token.substr(0, token.size() - 2));
    gkp::HPReal xi = gkp::xi_from_db(db);
    return gkp::to_decimal(gkp::gk_no_error(gkp::gkp_wave(xi, ctx), ctx).value);
  }
  return gkp::to_decimal(ctx.parse(token));
}

std::string cell_str(const json& result, const char* key) {
  if (!result.contains(key)) return "";
  const auto& v = result.at(key);
  if (v.is_null()) return "none";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<std::string> eps_grid(const gkp::RunConfig& cfg,
                                  const gkp::PrecisionContext& ctx) {
  std::vector<std::string> out;
  unsigned count = cfg.eps_count < 2 ? 2 : cfg.eps_count;
  for (unsigned i = 0; i < count; ++i) {
    double eps = cfg.eps_lo +
                 (cfg.eps_hi - cfg.eps_lo) * static_cast<double>(i) /
                     static_cast<double>(count - 1);
    out.push_back(gkp::to_decimal(ctx.real(eps)));
  }
  return out;
}

int finish_repro(const gkp::RunConfig& cfg, const std::string& name,
                 const SweepRun& run,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
  emit_table(cfg, name, columns, rows);
  emit_manifest(cfg, name, run);
  std::cout << name << ": " << run.outcomes.size() << " cells, "
            << run.failed << " failed, " << run.cache_hits << " cached, "
            << run.wall_s << " s -> " << cfg.out_dir << "/" << name << "."
            << cfg.format << "\n";
  for (const auto& c : run.outcomes)
    if (!c.error.empty())
      std::cerr << "cell " << c.params.dump() << " failed: " << c.error
                << "\n";
  if (run.failed * 10 > run.outcomes.size()) return kExitPartialSweep;
  return kExitOk;
}

int cmd_repro(const std::string& figure, const gkp::RunConfig& cfg) {
  gkp::PrecisionContext ctx(cfg.precision_bits, 1e-20);
  if (figure == "fig2") {
    std::vector<json> cells;
    for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) cells.push_back({{"n", n}});
    SweepRun run = run_cells("postselect", std::move(cells), cfg);
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : run.outcomes) {
      if (!c.error.empty()) continue;
      rows.push_back({cell_str(c.result, "n"), cell_str(c.result, "xi_opt"),
                      cell_str(c.result, "r_d_opt"),
                      cell_str(c.result, "fidelity"),
                      cell_str(c.result, "p_total"),
                      cell_str(c.result, "gk_no_error")});
    }
    return finish_repro(
        cfg, figure, run,
        {"n", "xi_opt", "r_d_opt", "fidelity", "P_total", "gk_no_error"},
        rows);
  }
  if (figure == "fig3") {
    std::vector<json> cells;
    for (const auto& token : cfg.upsilon) {
      std::string upsilon = resolve_upsilon(token, ctx);
      for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
        json cell{{"n", n}, {"upsilon", upsilon}};
        if (cfg.p_max > 0.0)
          cell["p_max"] = gkp::to_decimal(ctx.real(cfg.p_max));
        cell["grid_step"] = gkp::to_decimal(ctx.real(cfg.p_step));
        cells.push_back(std::move(cell));
      }
    }
    SweepRun run = run_cells("wt", std::move(cells), cfg);
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : run.outcomes) {
      if (!c.error.empty()) continue;
      size_t regions = c.result.at("regions").size();
      rows.push_back({cell_str(c.result, "n"), cell_str(c.result, "upsilon"),
                      std::to_string(regions),
                      cell_str(c.result, "p_upsilon"),
                      cell_str(c.result, "p_wt")});
    }
    return finish_repro(cfg, figure, run,
                        {"n", "upsilon", "regions", "P_upsilon", "P_WT"},
                        rows);
  }
  if (figure == "figA2") {
    std::vector<json> cells;
    for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
      json cell{{"n", n}};
      if (cfg.p_max > 0.0) cell["p_max"] = gkp::to_decimal(ctx.real(cfg.p_max));
      cells.push_back(std::move(cell));
    }
    SweepRun run = run_cells("figA2_point", std::move(cells), cfg);
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : run.outcomes) {
      if (!c.error.empty()) continue;
      rows.push_back({cell_str(c.result, "n"), cell_str(c.result, "fidelity"),
                      cell_str(c.result, "kl"),
                      cell_str(c.result, "support_clamped")});
    }
    return finish_repro(cfg, figure, run,
                        {"n", "fidelity", "kl", "support_clamped"}, rows);
  }
  if (figure == "fig4" || figure == "fig5") {
    const bool exact = figure == "fig4";
    std::vector<int> ns;
    if (cfg.n_lo == cfg.n_hi)
      ns = {cfg.n_lo};
    else
      ns = exact ? std::vector<int>{10, 40} : std::vector<int>{8};
    std::vector<std::string> p_tildes;
    if (exact) {
      gkp::HPReal sp = ctx.sqrt_pi();
      p_tildes = {gkp::to_decimal(ctx.zero()), gkp::to_decimal(sp),
                  gkp::to_decimal(ctx.real(2) * sp)};
    } else {
      p_tildes = {gkp::to_decimal(ctx.zero())};
    }
    std::vector<json> cells;
    for (int n : ns)
      for (const auto& pt : p_tildes)
        for (const auto& eps : eps_grid(cfg, ctx))
          cells.push_back({{"source", exact ? "exact" : "approx"},
                           {"n", n},
                           {"p_tilde", pt},
                           {"epsilon", eps}});
    SweepRun run = run_cells("povm_point", std::move(cells), cfg);
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : run.outcomes) {
      if (!c.error.empty()) continue;
      rows.push_back({c.params.at("source").get<std::string>(),
                      cell_str(c.params, "n"),
                      c.params.at("p_tilde").get<std::string>(),
                      c.params.at("epsilon").get<std::string>(),
                      cell_str(c.result, "probability"),
                      cell_str(c.result, "fidelity")});
    }
    return finish_repro(
        cfg, figure, run,
        {"source", "n", "p_tilde", "epsilon", "probability", "fidelity"},
        rows);
  }
  throw gkp::DomainError("unknown figure: " + figure +
                         " (expected fig2|fig3|figA2|fig4|fig5)");
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& which, const gkp::RunConfig& cfg) {
  gkp::PrecisionContext ctx(cfg.precision_bits, 1e-20);
  auto reports = gkp::run_suites(which, ctx);
  bool all_pass = true;
  for (const auto& rep : reports) {
    size_t passed = 0;
    for (const auto& c : rep.checks) {
      std::ostringstream os;
      os << (c.pass ? "[PASS] " : "[FAIL] ") << rep.suite << "/" << c.name
         << " measured=" << c.measured << " bound=" << c.bound;
      if (!c.detail.empty()) os << " detail=" << c.detail;
      std::cout << os.str() << "\n";
      if (c.pass) ++passed;
    }
    std::cout << "suite " << rep.suite << ": " << passed << "/"
              << rep.checks.size() << " passed\n";
    all_pass = all_pass && rep.all_pass();
  }
  return all_pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"high-precision breeding simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, bits_str, workers_str, out_dir, cache_dir, format,
      n_str, p_str, upsilon_csv;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--precision-bits", bits_str, "mantissa bits (>= 64)");
  app.add_option("--workers", workers_str, "sweep worker count");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--cache-dir", cache_dir, "sweep cache directory");
  app.add_option("--format", format, "csv|json");
  app.add_option("--n", n_str, "photon subtraction order (also narrows sweeps)");
  app.add_option("--p", p_str, "homodyne outcome for eval expressions");
  app.add_option("--upsilon", upsilon_csv,
                 "comma-separated thresholds (decimal or NdB)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate one quantity");
  eval->fallthrough();
  eval->add_option("expr", eval_args.expr,
                   "theta|gps|breed|homodyne|gfn|delta|gk")
      ->required();
  eval->add_option("--k", eval_args.k, "moment order");
  eval->add_option("--y", eval_args.y, "evaluation point");
  eval->add_option("--gamma", eval_args.gamma, "Gaussian rate");
  eval->add_option("--q", eval_args.q, "position argument");
  eval->add_option("--xi", eval_args.xi, "grid-state squeezing");
  eval->add_flag("--norm", eval_args.norm, "report squared norm instead");

  std::string figure;
  auto* repro = app.add_subcommand("repro", "reproduce a figure dataset");
  repro->fallthrough();
  repro->add_option("figure", figure, "fig2|fig3|figA2|fig4|fig5")->required();

  std::string suite = "all";
  auto* validate_cmd = app.add_subcommand("validate", "run property suites");
  validate_cmd->fallthrough();
  validate_cmd->add_option("suite", suite,
                           "numerics|breeding|exact|povm|gk|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    error_line("usage", e.what());
    return kExitUsage;
  }

  try {
    gkp::RunConfig cfg;
    if (!config_path.empty()) cfg = gkp::load_config(config_path);
    auto override_if = [&cfg](const char* key, const std::string& value) {
      if (!value.empty()) gkp::apply_setting(cfg, key, value);
    };
    override_if("precision_bits", bits_str);
    override_if("workers", workers_str);
    override_if("out_dir", out_dir);
    override_if("cache_dir", cache_dir);
    override_if("format", format);
    override_if("upsilon", upsilon_csv);
    override_if("n", n_str);
    gkp::validate(cfg);

    if (app.got_subcommand(eval)) {
      eval_args.n = n_str;
      eval_args.p = p_str;
      return cmd_eval(eval_args, cfg);
    }
    if (app.got_subcommand(repro)) return cmd_repro(figure, cfg);
    return cmd_validate(suite, cfg);
  } catch (const gkp::Error& e) {
    error_line(e.code(), e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    error_line("internal", e.what());
    return 1;
  }
}
