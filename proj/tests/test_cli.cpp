#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path outp = fs::path("cli_stdout_" + std::to_string(counter) + ".txt");
  fs::path errp = fs::path("cli_stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(GKPSIM_BINARY) + " " + args + " > " +
                    outp.string() + " 2> " + errp.string();
  int rc = std::system(cmd.c_str());
  RunResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(outp);
  res.err = slurp(errp);
  fs::remove(outp);
  fs::remove(errp);
  return res;
}

// First "key=..." line in stdout, parsed as a double.
double value_of(const std::string& out, const std::string& key) {
  std::istringstream is(out);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key + "=", 0) == 0)
      return std::stod(line.substr(key.size() + 1));
  }
  FAIL("missing line ", key, "= in output:\n", out);
  return 0.0;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p,
                                               std::string* header) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header) *header += line + "\n";
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!saw_columns) {
      saw_columns = true;
      if (header) *header += line + "\n";
      continue;
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("ad-hoc evaluation prints documented spot values") {
  RunResult theta = run_cli("eval theta --k 0 --y 0 --gamma 1");
  CHECK(theta.code == 0);
  CHECK(std::abs(value_of(theta.out, "value") - 2.5066282746310002) < 1e-12);
  CHECK(theta.out.find("bits=256") != std::string::npos);

  RunResult gps = run_cli("eval gps --n 7 --norm");
  CHECK(gps.code == 0);
  CHECK(std::abs(value_of(gps.out, "value") - 1.0) < 1e-12);

  RunResult delta8 = run_cli("eval delta --n 8 --p 0");
  CHECK(delta8.code == 0);
  CHECK(std::abs(value_of(delta8.out, "value")) < 1e-20);
  CHECK(value_of(delta8.out, "g") > 0.0);

  // Odd order: p = 0 lies between heralding peaks, so the correction is
  // half a grid period, sqrt(pi)/2.
  RunResult delta13 = run_cli("eval delta --n 13 --p 0");
  CHECK(delta13.code == 0);
  CHECK(std::abs(value_of(delta13.out, "value") - 0.8862269254527580) <
        1e-12);

  RunResult hom = run_cli("eval homodyne --n 8 --p 0");
  CHECK(hom.code == 0);
  CHECK(value_of(hom.out, "value") > 0.0);

  RunResult gk = run_cli("eval gk --xi 1.0");
  CHECK(gk.code == 0);
  double v = value_of(gk.out, "value");
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(std::abs(value_of(gk.out, "cell_mass") - 1.0) < 1e-6);
}

TEST_CASE("evaluation output is deterministic") {
  RunResult a = run_cli("eval breed --n 7 --p 0.37");
  RunResult b = run_cli("eval breed --n 7 --p 0.37");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(value_of(a.out, "density") > 0.0);
  CHECK(value_of(a.out, "norm") > 0.0);
}

TEST_CASE("usage errors exit with code 4 and a machine-readable line") {
  CHECK(run_cli("frobnicate").code == 4);
  RunResult missing = run_cli("eval theta --y 0 --gamma 1");
  CHECK(missing.code == 4);
  CHECK(missing.err.find("error code=") != std::string::npos);
  CHECK(run_cli("eval nonsense").code == 4);
  CHECK(run_cli("repro fig9").code == 4);
  RunResult bits = run_cli("--precision-bits 32 eval theta --k 0 --y 0 --gamma 1");
  CHECK(bits.code == 4);
  CHECK(bits.err.find("error code=") != std::string::npos);
  RunResult order = run_cli("eval gps --n 5 --norm");
  CHECK(order.code == 4);
  CHECK(order.err.find("error code=domain") != std::string::npos);
}

TEST_CASE("config files are validated and echoed") {
  fs::path cfg = fs::path("cli_bad_config.txt");
  {
    std::ofstream f(cfg);
    f << "not_a_key=1\n";
  }
  RunResult bad = run_cli("--config " + cfg.string() +
                          " eval theta --k 0 --y 0 --gamma 1");
  CHECK(bad.code == 4);
  CHECK(bad.err.find("error code=domain") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("property suite subcommand reports per-check lines") {
  RunResult res = run_cli("validate gk");
  CHECK(res.code == 0);
  CHECK(res.out.find("[PASS]") != std::string::npos);
  CHECK(res.out.find("[FAIL]") == std::string::npos);
  CHECK(res.out.find("suite gk:") != std::string::npos);
}

TEST_CASE("figure reproduction emits table, manifest, and cache") {
  fs::path outdir = fs::path("cli_out");
  fs::path cachedir = fs::path("cli_cache");
  fs::remove_all(outdir);
  fs::remove_all(cachedir);
  fs::path cfg = fs::path("cli_fig5_config.txt");
  {
    std::ofstream f(cfg);
    f << "# smoke-scale window grid\n";
    f << "eps_lo=0.05\n";
    f << "eps_hi=0.15\n";
    f << "eps_count=4\n";
  }
  std::string base = "--config " + cfg.string() + " --out-dir " +
                     outdir.string() + " --cache-dir " + cachedir.string();
  RunResult res = run_cli(base + " repro fig5");
  REQUIRE(res.code == 0);

  std::string header;
  auto rows = csv_rows(outdir / "fig5.csv", &header);
  REQUIRE(rows.size() == 4);
  CHECK(header.find("# figure fig5") != std::string::npos);
  CHECK(header.find("# config eps_count=4") != std::string::npos);
  CHECK(header.find("# given eps_count=4") != std::string::npos);
  CHECK(header.find("source,n,p_tilde,epsilon,probability,fidelity") !=
        std::string::npos);
  bool saw_working_window = false;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 6);
    CHECK(row[0] == "approx");
    CHECK(row[1] == "8");
    double eps = std::stod(row[3]);
    double prob = std::stod(row[4]);
    double fid = std::stod(row[5]);
    CHECK(prob > 0.0);
    CHECK(prob < 1.0);
    CHECK(fid > 0.0);
    CHECK(fid <= 1.0);
    if (std::abs(eps - 0.15) < 1e-12) {
      saw_working_window = true;
      // converged value at the widest tabulated window
      CHECK(fid == doctest::Approx(0.998997804221).epsilon(1e-8));
    }
  }
  CHECK(saw_working_window);

  json manifest = json::parse(slurp(outdir / "fig5_manifest.json"));
  CHECK(manifest.at("figure") == "fig5");
  CHECK(manifest.at("cells_total") == 4);
  CHECK(manifest.at("cells_failed") == 0);
  CHECK(manifest.at("precision_bits") == 256);
  CHECK(manifest.at("errors").empty());

  // Re-running in JSON format replays every cell from the cache.
  RunResult rerun = run_cli(base + " --format json repro fig5");
  REQUIRE(rerun.code == 0);
  json doc = json::parse(slurp(outdir / "fig5.json"));
  CHECK(doc.at("figure") == "fig5");
  CHECK(doc.at("rows").size() == 4);
  json manifest2 = json::parse(slurp(outdir / "fig5_manifest.json"));
  CHECK(manifest2.at("cache_hits") == 4);

  fs::remove(cfg);
  fs::remove_all(outdir);
  fs::remove_all(cachedir);
}
