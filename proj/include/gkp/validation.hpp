#pragma once

#include <string>
#include <vector>

#include "gkp/hp.hpp"

namespace gkp {

/// One property check: pass iff measured <= bound (measured is the
/// check-specific error magnitude, e.g. max relative error, fidelity
/// shortfall, or argmax distance). A check that throws records the message in
/// `detail` and fails.
struct CheckResult {
  std::string name;
  bool pass;
  double measured;
  double bound;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// {"numerics", "breeding", "exact", "povm", "gk"}.
std::vector<std::string> suite_names();

/// Runs the named property suite at the given precision.
SuiteReport run_suite(const std::string& suite, const PrecisionContext& ctx);

/// "all" runs every suite in suite_names() order; otherwise the one named.
std::vector<SuiteReport> run_suites(const std::string& which,
                                    const PrecisionContext& ctx);

}  // namespace gkp
